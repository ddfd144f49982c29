#pragma once

// Slow, transparent reference implementations used only by the tests. They
// deliberately take different numerical routes than the library (long double
// normal equations solved directly, tail probabilities by adaptive Simpson
// quadrature of the density) so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// --------------------------------------------------------------------------
// Linear least squares, long double throughout.
// --------------------------------------------------------------------------

/// Solve A x = b by Gauss-Jordan elimination with partial pivoting.
inline std::vector<long double> solve(std::vector<std::vector<long double>> a,
                                      std::vector<long double> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs((double)a[r][col]) > std::fabs((double)a[piv][col]))
                piv = r;
        if (a[piv][col] == 0.0L) throw std::runtime_error("singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        const long double d = a[col][col];
        for (std::size_t c = 0; c < n; ++c) a[col][c] /= d;
        b[col] /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0.0L) continue;
            const long double f = a[r][col];
            for (std::size_t c = 0; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    return b;
}

struct OlsFit {
    std::vector<long double> coef;  ///< [intercept, one per regressor column]
    long double ss_resid = 0;
    long double ss_total = 0;       ///< centered
};

/// Ordinary least squares of y on an intercept plus the columns of x
/// (x[row][column]), via the normal equations in long double.
inline OlsFit ols(const std::vector<std::vector<double>>& x,
                  const std::vector<double>& y) {
    const std::size_t n = y.size();
    const std::size_t k = x.empty() ? 0 : x[0].size();
    const std::size_t m = k + 1;
    auto cell = [&](std::size_t row, std::size_t col) -> long double {
        return col == 0 ? 1.0L : (long double)x[row][col - 1];
    };
    std::vector<std::vector<long double>> xtx(m, std::vector<long double>(m, 0.0L));
    std::vector<long double> xty(m, 0.0L);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < m; ++i) {
            xty[i] += cell(r, i) * (long double)y[r];
            for (std::size_t j = 0; j < m; ++j) xtx[i][j] += cell(r, i) * cell(r, j);
        }
    }
    OlsFit fit;
    fit.coef = solve(xtx, xty);
    long double mean = 0.0L;
    for (double v : y) mean += v;
    mean /= (long double)n;
    for (std::size_t r = 0; r < n; ++r) {
        long double pred = fit.coef[0];
        for (std::size_t j = 0; j < k; ++j) pred += fit.coef[j + 1] * (long double)x[r][j];
        const long double e = (long double)y[r] - pred;
        fit.ss_resid += e * e;
        const long double c = (long double)y[r] - mean;
        fit.ss_total += c * c;
    }
    return fit;
}

// --------------------------------------------------------------------------
// Tail probabilities by quadrature of the density.
// --------------------------------------------------------------------------

inline long double simpson_recurse(const std::function<long double(long double)>& f,
                                   long double a, long double b, long double fa,
                                   long double fm, long double fb, long double whole,
                                   long double eps, int depth) {
    const long double m = (a + b) / 2;
    const long double lm = (a + m) / 2, rm = (m + b) / 2;
    const long double flm = f(lm), frm = f(rm);
    const long double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const long double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs((double)(left + right - whole)) <= 15 * (double)eps)
        return left + right + (left + right - whole) / 15;
    return simpson_recurse(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

/// Adaptive Simpson quadrature of f over [a, b].
inline long double integrate(const std::function<long double(long double)>& f,
                             long double a, long double b,
                             long double eps = 1e-12L) {
    const long double fa = f(a), fb = f(b), fm = f((a + b) / 2);
    const long double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return simpson_recurse(f, a, b, fa, fm, fb, whole, eps, 40);
}

/// Density of the F distribution with (d1, d2) degrees of freedom.
inline long double f_pdf(long double x, long double d1, long double d2) {
    if (x <= 0) return 0;
    const long double lg = std::lgamma((double)((d1 + d2) / 2)) -
                           std::lgamma((double)(d1 / 2)) -
                           std::lgamma((double)(d2 / 2));
    const long double logpdf = lg + (d1 / 2) * std::log((double)(d1 / d2)) +
                               (d1 / 2 - 1) * std::log((double)x) -
                               ((d1 + d2) / 2) * std::log((double)(1 + d1 * x / d2));
    return std::exp((double)logpdf);
}

/// Integral of a density over [0, upper] in geometrically growing segments,
/// so a huge upper bound cannot make the quadrature step over the mass that
/// sits near the origin.
inline long double density_integral(
    const std::function<long double(long double)>& pdf, long double upper,
    long double eps = 1e-12L) {
    long double total = 0, lo = 0;
    long double hi = std::min(upper, 1.0L);
    while (lo < upper) {
        total += integrate(pdf, lo, hi, eps);
        lo = hi;
        hi = std::min(upper, hi * 2);
    }
    return total;
}

/// P(F > f) by integrating the density from 0 to f.
inline long double f_p_value(long double f, long double d1, long double d2) {
    if (f <= 0) return 1;
    auto pdf = [&](long double x) { return f_pdf(x, d1, d2); };
    return 1 - density_integral(pdf, f);
}

/// Density of Student's t with df degrees of freedom.
inline long double t_pdf(long double x, long double df) {
    const long double lg = std::lgamma((double)((df + 1) / 2)) -
                           std::lgamma((double)(df / 2)) -
                           0.5L * std::log((double)(df * 3.14159265358979323846L));
    return std::exp((double)(lg - ((df + 1) / 2) *
                                      std::log((double)(1 + x * x / df))));
}

/// Two-sided P(|T| > t).
inline long double t_p_value(long double t, long double df) {
    const long double a = std::fabs((double)t);
    if (a == 0) return 1;
    auto pdf = [&](long double x) { return t_pdf(x, df); };
    return 1 - 2 * density_integral(pdf, a);
}

/// Standard normal CDF via the complementary error function.
inline long double normal_cdf(long double x) {
    return 0.5L * (long double)std::erfc((double)(-x / 1.41421356237309504880L));
}

} // namespace oracle
