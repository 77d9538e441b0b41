#pragma once

// Test-only oracles, kept deliberately independent of the library's numeric
// paths: quadrature instead of incomplete-gamma/beta series, explicit
// Gauss-Jordan normal equations instead of QR, plain summation loops instead
// of the stats helpers.

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// ---- adaptive Simpson quadrature --------------------------------------------

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fb, double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1) +
           simpson_step(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fb, fm, whole, tol, 50);
}

// ---- distribution survival functions by quadrature ----------------------------

inline double chi2_pdf(double x, double k) {
    if (x <= 0.0) return 0.0;
    return std::exp((k / 2.0 - 1.0) * std::log(x) - x / 2.0 - (k / 2.0) * std::log(2.0) -
                    std::lgamma(k / 2.0));
}

// Valid for k >= 2 (pdf finite at the origin).
inline double chi2_sf_quadrature(double x, double k) {
    if (x <= 0.0) return 1.0;
    return 1.0 - integrate([k](double t) { return chi2_pdf(t, k); }, 0.0, x);
}

inline double f_pdf(double x, double d1, double d2) {
    if (x <= 0.0) return 0.0;
    const double half1 = d1 / 2.0;
    const double half2 = d2 / 2.0;
    const double log_b = std::lgamma(half1) + std::lgamma(half2) - std::lgamma(half1 + half2);
    return std::exp(half1 * std::log(d1 / d2) + (half1 - 1.0) * std::log(x) -
                    (half1 + half2) * std::log1p(d1 * x / d2) - log_b);
}

// Valid for d1 >= 2.
inline double f_sf_quadrature(double x, double d1, double d2) {
    if (x <= 0.0) return 1.0;
    return 1.0 - integrate([d1, d2](double t) { return f_pdf(t, d1, d2); }, 0.0, x);
}

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

inline double student_t_pdf(double x, double df) {
    return std::exp(std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                    0.5 * std::log(df * M_PI) -
                    ((df + 1.0) / 2.0) * std::log1p(x * x / df));
}

inline double t_p_twosided_quadrature(double t, double df) {
    const double a = std::fabs(t);
    // power-law tail: push the cutoff far enough for the residual mass to be
    // negligible even at small df
    const double b = a + 50.0 + 5000.0 / df;
    return 2.0 * integrate([df](double x) { return student_t_pdf(x, df); }, a, b);
}

// ---- explicit normal-equations least squares -----------------------------------

struct OlsOracleResult {
    std::vector<double> coef;
    std::vector<double> stderrs;
    std::vector<double> residuals;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double aic = 0.0;
    double durbin_watson = 0.0;
    double ssr = 0.0;
};

// Gauss-Jordan inverse on plain arrays; no shared code with the library path.
inline std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-300) throw std::runtime_error("oracle: singular matrix");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const double d = a[col][col];
        for (size_t j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            for (size_t j = 0; j < n; ++j) {
                a[r][j] -= factor * a[col][j];
                inv[r][j] -= factor * inv[col][j];
            }
        }
    }
    return inv;
}

inline OlsOracleResult normal_equations_ols(const std::vector<double>& y,
                                            const std::vector<std::vector<double>>& X) {
    const size_t T = y.size();
    const size_t k = X[0].size();
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    for (size_t t = 0; t < T; ++t)
        for (size_t i = 0; i < k; ++i) {
            xty[i] += X[t][i] * y[t];
            for (size_t j = 0; j < k; ++j) xtx[i][j] += X[t][i] * X[t][j];
        }
    const auto xtx_inv = invert(xtx);

    OlsOracleResult out;
    out.coef.assign(k, 0.0);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) out.coef[i] += xtx_inv[i][j] * xty[j];

    out.residuals.assign(T, 0.0);
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(T);
    double sst = 0.0;
    for (size_t t = 0; t < T; ++t) {
        double fitted = 0.0;
        for (size_t i = 0; i < k; ++i) fitted += X[t][i] * out.coef[i];
        out.residuals[t] = y[t] - fitted;
        out.ssr += out.residuals[t] * out.residuals[t];
        sst += (y[t] - ybar) * (y[t] - ybar);
    }
    const double sigma2 = out.ssr / static_cast<double>(T - k);
    out.stderrs.assign(k, 0.0);
    for (size_t i = 0; i < k; ++i) out.stderrs[i] = std::sqrt(sigma2 * xtx_inv[i][i]);
    out.r2 = (sst > 0.0) ? 1.0 - out.ssr / sst : 1.0;
    out.adj_r2 = 1.0 - (1.0 - out.r2) * (static_cast<double>(T) - 1.0) /
                           (static_cast<double>(T) - static_cast<double>(k));
    out.aic = static_cast<double>(T) * std::log(out.ssr / static_cast<double>(T)) +
              2.0 * static_cast<double>(k);
    double num = 0.0;
    for (size_t t = 1; t < T; ++t) {
        const double d = out.residuals[t] - out.residuals[t - 1];
        num += d * d;
    }
    out.durbin_watson = num / out.ssr;
    return out;
}

// ---- brute-force sample covariance ------------------------------------------------

inline double brute_cov(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(n - 1);
}

}  // namespace oracles
