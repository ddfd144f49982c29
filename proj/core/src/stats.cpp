#include "irrisim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irrisim/engine.hpp"

namespace irrisim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double contrast(const std::vector<int>& row, const TermKey& key) {
    return key.b < 0 ? row[key.a]
                     : static_cast<double>(row[key.a]) * row[key.b];
}

std::vector<TermKey> all_terms(int n_factors) {
    std::vector<TermKey> terms;
    for (int a = 0; a < n_factors; ++a) terms.push_back({a, -1});
    for (int a = 0; a < n_factors; ++a) {
        for (int b = a + 1; b < n_factors; ++b) terms.push_back({a, b});
    }
    return terms;
}

void check_shape(const std::vector<std::vector<int>>& levels,
                 const std::vector<double>& y, std::size_t n_names) {
    if (levels.empty() || levels.size() != y.size()) {
        throw ValidationError("levels and response must be non-empty and equal length");
    }
    for (const auto& row : levels) {
        if (row.size() != n_names) {
            throw ValidationError("level row width does not match factor names");
        }
        for (int v : row) {
            if (v != -1 && v != 1) {
                throw ValidationError("coded levels must be -1 or +1");
            }
        }
    }
}

// Continued fraction for the incomplete beta function, modified Lentz.
double betacf(double a, double b, double x) {
    constexpr double kFpMin = 1e-300;
    constexpr double kEps = 3e-16;
    const double qab = a + b;
    const double qap = a + 1;
    const double qam = a - 1;
    double c = 1;
    double d = 1 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1) < kEps) return h;
    }
    throw EngineError("incomplete beta continued fraction did not converge");
}

} // namespace

std::string term_name(const TermKey& key,
                      const std::vector<std::string>& factor_names) {
    if (key.b < 0) return factor_names[key.a];
    return factor_names[key.a] + ":" + factor_names[key.b];
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0) || !(b > 0)) {
        throw ValidationError("incomplete beta needs a > 0 and b > 0");
    }
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                  std::lgamma(b) + a * std::log(x) +
                                  b * std::log1p(-x));
    if (x < (a + 1) / (a + b + 2)) {
        return front * betacf(a, b, x) / a;
    }
    return 1 - front * betacf(b, a, 1 - x) / b;
}

double f_p_value(double f, double d1, double d2) {
    if (!(d1 > 0) || !(d2 > 0)) {
        throw ValidationError("F distribution needs positive df");
    }
    if (f <= 0) return 1;
    return regularized_incomplete_beta(d2 / 2, d1 / 2, d2 / (d2 + d1 * f));
}

double t_p_value(double t, double df) {
    if (!(df > 0)) throw ValidationError("t distribution needs positive df");
    return regularized_incomplete_beta(df / 2, 0.5, df / (df + t * t));
}

AnovaTable anova(const std::vector<std::vector<int>>& levels,
                 const std::vector<double>& y,
                 const std::vector<std::string>& factor_names) {
    check_shape(levels, y, factor_names.size());
    const int k = static_cast<int>(factor_names.size());
    const long n = static_cast<long>(y.size());
    const std::vector<TermKey> terms = all_terms(k);

    // contrast decomposition assumes orthogonal, balanced columns
    for (const auto& t : terms) {
        double sum = 0;
        for (const auto& row : levels) sum += contrast(row, t);
        if (sum != 0) {
            throw ValidationError("design columns are not balanced: " +
                                  term_name(t, factor_names));
        }
    }

    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double ss_total = 0;
    for (double v : y) ss_total += (v - mean) * (v - mean);

    AnovaTable table;
    table.ss_total = ss_total;
    table.df_total = n - 1;
    table.df_resid = table.df_total - static_cast<long>(terms.size());
    table.saturated = table.df_resid <= 0;

    double ss_model = 0;
    for (const auto& t : terms) {
        double s = 0;
        for (long i = 0; i < n; ++i) s += contrast(levels[i], t) * y[i];
        AnovaTerm row;
        row.key = t;
        row.name = term_name(t, factor_names);
        row.coef = s / static_cast<double>(n);
        row.ss = s * s / static_cast<double>(n);
        row.df = 1;
        row.ms = row.ss;
        table.terms.push_back(row);
        ss_model += row.ss;
    }
    table.ss_resid = std::max(0.0, ss_total - ss_model);
    if (ss_total - ss_model < -1e-6 * std::max(1.0, ss_total)) {
        throw EngineError("negative residual SS: design is not orthogonal");
    }
    table.ms_resid = table.saturated
                         ? kNaN
                         : table.ss_resid / static_cast<double>(table.df_resid);

    for (auto& row : table.terms) {
        if (table.saturated) {
            row.f = kNaN;
            row.p = kNaN;
        } else if (row.ss == 0) {
            row.f = 0;
            row.p = 1;
        } else if (table.ms_resid == 0) {
            row.f = std::numeric_limits<double>::infinity();
            row.p = 0;
        } else {
            row.f = row.ms / table.ms_resid;
            row.p = f_p_value(row.f, 1, static_cast<double>(table.df_resid));
        }
    }
    return table;
}

std::vector<TermKey> significant_terms(const AnovaTable& table, double alpha) {
    if (table.saturated) {
        throw ValidationError("saturated model: no residual df for testing");
    }
    int n_factors = 0;
    for (const auto& t : table.terms) {
        n_factors = std::max({n_factors, t.key.a + 1, t.key.b + 1});
    }
    std::vector<char> main_in(static_cast<std::size_t>(n_factors), 0);
    std::vector<TermKey> inter;
    for (const auto& t : table.terms) {
        if (!(t.p < alpha)) continue;
        if (t.key.is_interaction()) {
            inter.push_back(t.key);
            main_in[t.key.a] = 1;
            main_in[t.key.b] = 1;
        } else {
            main_in[t.key.a] = 1;
        }
    }
    std::vector<TermKey> out;
    for (int a = 0; a < n_factors; ++a) {
        if (main_in[a]) out.push_back({a, -1});
    }
    out.insert(out.end(), inter.begin(), inter.end());
    return out;
}

OlsModel ols_fit(const std::vector<std::vector<int>>& levels,
                 const std::vector<double>& y,
                 const std::vector<TermKey>& terms,
                 const std::vector<std::string>& factor_names) {
    check_shape(levels, y, factor_names.size());
    const long n = static_cast<long>(y.size());
    const int t = static_cast<int>(terms.size());
    const int dim = t + 1;  // intercept first
    if (n <= t) throw ValidationError("more terms than observations");

    auto design_value = [&](long i, int j) {
        return j == 0 ? 1.0 : contrast(levels[i], terms[j - 1]);
    };

    // normal equations; invert X'X (Gauss-Jordan, partial pivoting) so the
    // diagonal also yields coefficient standard errors
    const int width = 2 * dim + 1;  // [X'X | I | X'y]
    std::vector<std::vector<double>> m(dim, std::vector<double>(width, 0.0));
    for (long i = 0; i < n; ++i) {
        for (int r = 0; r < dim; ++r) {
            const double xr = design_value(i, r);
            for (int c = r; c < dim; ++c) m[r][c] += xr * design_value(i, c);
            m[r][width - 1] += xr * y[i];
        }
    }
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < r; ++c) m[r][c] = m[c][r];
        m[r][dim + r] = 1.0;
    }
    for (int col = 0; col < dim; ++col) {
        int pivot = col;
        for (int r = col + 1; r < dim; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) < 1e-12) {
            throw ValidationError("normal equations are singular (aliased terms?)");
        }
        std::swap(m[col], m[pivot]);
        const double d = m[col][col];
        for (int c = col; c < width; ++c) m[col][c] /= d;
        for (int r = 0; r < dim; ++r) {
            if (r == col) continue;
            const double factor = m[r][col];
            if (factor == 0) continue;
            for (int c = col; c < width; ++c) m[r][c] -= factor * m[col][c];
        }
    }

    OlsModel model;
    model.n_factors = static_cast<int>(factor_names.size());
    model.terms = terms;
    for (const auto& key : terms) {
        model.names.push_back(term_name(key, factor_names));
    }
    model.intercept = m[0][width - 1];
    for (int j = 1; j < dim; ++j) model.coefs.push_back(m[j][width - 1]);
    model.n = n;
    model.df_resid = n - dim;

    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double ss_total = 0;
    double ss_resid = 0;
    for (long i = 0; i < n; ++i) {
        double fit = model.intercept;
        for (int j = 0; j < t; ++j) {
            fit += model.coefs[j] * contrast(levels[i], terms[j]);
        }
        ss_total += (y[i] - mean) * (y[i] - mean);
        ss_resid += (y[i] - fit) * (y[i] - fit);
    }
    model.r2 = ss_total > 0 ? 1 - ss_resid / ss_total : 1;
    model.adj_r2 =
        model.df_resid > 0
            ? 1 - (1 - model.r2) * static_cast<double>(n - 1) /
                      static_cast<double>(model.df_resid)
            : model.r2;
    model.sigma2 = model.df_resid > 0
                       ? ss_resid / static_cast<double>(model.df_resid)
                       : 0;
    model.intercept_se = std::sqrt(model.sigma2 * m[0][dim]);
    for (int j = 1; j < dim; ++j) {
        model.coef_se.push_back(std::sqrt(model.sigma2 * m[j][dim + j]));
    }
    return model;
}

double normal_quantile(double p) {
    if (!(p > 0) || !(p < 1)) {
        throw ValidationError("normal quantile needs p in (0, 1)");
    }
    // Acklam's rational approximation with one Halley refinement step
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00, 2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= 1 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
             a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        const double q = std::sqrt(-2 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
              c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2 * 3.14159265358979323846) *
                     std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

double evaluate(const OlsModel& model, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != model.n_factors) {
        throw ValidationError("point dimension does not match the model");
    }
    double out = model.intercept;
    for (std::size_t j = 0; j < model.terms.size(); ++j) {
        const TermKey& key = model.terms[j];
        const double v = key.b < 0 ? x[key.a] : x[key.a] * x[key.b];
        out += model.coefs[j] * v;
    }
    return out;
}

std::vector<SurfacePoint> surface_grid(const OlsModel& model, int f1, int f2,
                                       int grid_n) {
    if (f1 < 0 || f1 >= model.n_factors || f2 < 0 || f2 >= model.n_factors ||
        f1 == f2) {
        throw ValidationError("surface needs two distinct model factors");
    }
    if (grid_n < 2) throw ValidationError("grid size must be >= 2");
    std::vector<SurfacePoint> out;
    out.reserve(static_cast<std::size_t>(grid_n) * grid_n);
    std::vector<double> x(model.n_factors, 0.0);
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            x.assign(model.n_factors, 0.0);
            x[f1] = -1 + 2.0 * i / (grid_n - 1);
            x[f2] = -1 + 2.0 * j / (grid_n - 1);
            out.push_back({x[f1], x[f2], evaluate(model, x)});
        }
    }
    return out;
}

} // namespace irrisim
