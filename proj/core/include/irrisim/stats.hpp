#pragma once

#include <string>
#include <vector>

namespace irrisim {

/// Model term: main effect when b < 0, else the a*b interaction (a < b).
struct TermKey {
    int a;
    int b = -1;
    bool is_interaction() const { return b >= 0; }
    friend bool operator==(const TermKey& x, const TermKey& y) {
        return x.a == y.a && x.b == y.b;
    }
};

std::string term_name(const TermKey& key,
                      const std::vector<std::string>& factor_names);

struct AnovaTerm {
    TermKey key;
    std::string name;
    double coef;  ///< regression coefficient in coded units
    double ss;
    long df;
    double ms;
    double f;
    double p;
};

/// Single-df decomposition over all mains and two-factor interactions.
struct AnovaTable {
    std::vector<AnovaTerm> terms;  ///< mains first, then interactions
    double ss_total;               ///< corrected total
    long df_total;
    double ss_resid;
    long df_resid;
    double ms_resid;   ///< NaN when saturated
    bool saturated;    ///< no residual degrees of freedom
};

/**
 * ANOVA via orthogonal contrasts on a coded two-level design: rows of
 * `levels` hold -1/+1 per factor, one response value each. Columns must be
 * mutually orthogonal (regular fractions are); this is checked and a
 * non-orthogonal input raises an error. Terms with zero SS get F = 0, p = 1.
 */
AnovaTable anova(const std::vector<std::vector<int>>& levels,
                 const std::vector<double>& y,
                 const std::vector<std::string>& factor_names);

/// Terms with p below alpha, closed under hierarchy (an included interaction
/// pulls in both of its mains). Throws when the table is saturated.
std::vector<TermKey> significant_terms(const AnovaTable& table,
                                       double alpha = 0.05);

struct OlsModel {
    int n_factors;
    std::vector<TermKey> terms;  ///< excluding the intercept
    std::vector<std::string> names;
    double intercept;
    std::vector<double> coefs;
    double intercept_se;
    std::vector<double> coef_se;  ///< sqrt(sigma2 * (X'X)^-1 diagonal)
    double r2;
    double adj_r2;
    long n;
    long df_resid;
    double sigma2;  ///< residual mean square
};

/// Least squares through the normal equations (Gauss-Jordan with partial
/// pivoting); works for any term subset, orthogonal or not.
OlsModel ols_fit(const std::vector<std::vector<int>>& levels,
                 const std::vector<double>& y,
                 const std::vector<TermKey>& terms,
                 const std::vector<std::string>& factor_names);

/// Model prediction at a coded point (one coordinate per factor).
double evaluate(const OlsModel& model, const std::vector<double>& x);

struct SurfacePoint {
    double x1;
    double x2;
    double value;
};

/// grid_n x grid_n predictions over [-1, 1]^2 for factors f1, f2 with every
/// other factor held at its coded center 0.
std::vector<SurfacePoint> surface_grid(const OlsModel& model, int f1, int f2,
                                       int grid_n);

/// I_x(a, b), continued-fraction evaluation (modified Lentz).
double regularized_incomplete_beta(double a, double b, double x);

/// Standard normal quantile (rational approximation, ~1e-9 absolute).
double normal_quantile(double p);

/// Upper tail of the F distribution with (d1, d2) degrees of freedom.
double f_p_value(double f, double d1, double d2);

/// Two-sided p for a t statistic.
double t_p_value(double t, double df);

} // namespace irrisim
