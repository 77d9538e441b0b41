#include "drix/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "drix/errors.hpp"
#include "drix/stats.hpp"

namespace drix::diag {

TestResult breusch_godfrey(const ols::RegressionFit& fit, const Eigen::MatrixXd& X, int lags) {
    const Eigen::Index T = X.rows();
    const Eigen::Index k = X.cols();
    if (fit.residuals.size() != T)
        throw ValidationError("breusch_godfrey: residual length does not match design rows");
    if (lags < 1) throw ValidationError("breusch_godfrey: lags must be >= 1");
    if (T <= k + lags)
        throw ValidationError("breusch_godfrey: too few observations for requested lag order");

    Eigen::MatrixXd aux(T, k + lags);
    aux.leftCols(k) = X;
    for (int j = 1; j <= lags; ++j)
        for (Eigen::Index t = 0; t < T; ++t)
            aux(t, k + j - 1) = (t - j >= 0) ? fit.residuals(t - j) : 0.0;

    std::vector<std::string> names(k + lags);
    for (Eigen::Index i = 0; i < k; ++i) names[i] = "x" + std::to_string(i);
    for (int j = 1; j <= lags; ++j) names[k + j - 1] = "resid_lag" + std::to_string(j);

    const auto aux_fit = ols::ols_fit(fit.residuals, aux, std::move(names));

    TestResult out;
    out.name = "breusch_godfrey";
    out.statistic = static_cast<double>(T) * aux_fit.r2;
    out.df1 = lags;
    out.df2 = 0;
    out.p_value = stats::chi2_sf(out.statistic, static_cast<double>(lags));
    out.reject_at_5pct = out.p_value < 0.05;
    return out;
}

TestResult ramsey_reset(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                        const std::vector<int>& powers) {
    if (powers.empty()) throw ValidationError("ramsey_reset: powers must be non-empty");
    for (int p : powers)
        if (p < 2 || p > 4) throw ValidationError("ramsey_reset: powers must lie in {2,3,4}");
    const Eigen::Index T = X.rows();
    const Eigen::Index k = X.cols();
    const Eigen::Index q = static_cast<Eigen::Index>(powers.size());
    if (T <= k + q) throw ValidationError("ramsey_reset: too few observations");

    std::vector<std::string> base_names(k);
    for (Eigen::Index i = 0; i < k; ++i) base_names[i] = "x" + std::to_string(i);
    const auto base = ols::ols_fit(y, X, base_names);
    if (!(base.ssr > 0.0) || base.ssr <= 1e-14 * y.squaredNorm())
        throw NumericError("ramsey_reset: degenerate perfect fit, no residual variance");

    const Eigen::VectorXd fitted = y - base.residuals;
    const double sd = std::sqrt((fitted.array() - fitted.mean()).square().sum() /
                                static_cast<double>(T - 1));
    if (!(sd > 0.0)) throw NumericError("ramsey_reset: fitted values are constant");

    // Powers of scale-normalized fitted values; pure column rescaling, so the
    // F statistic is unchanged while the augmented design stays conditioned.
    Eigen::MatrixXd augmented(T, k + q);
    augmented.leftCols(k) = X;
    for (Eigen::Index j = 0; j < q; ++j)
        augmented.col(k + j) = (fitted.array() / sd).pow(powers[j]).matrix();

    std::vector<std::string> aug_names = base_names;
    for (int p : powers) aug_names.push_back("fitted_pow" + std::to_string(p));
    const auto full = ols::ols_fit(y, augmented, std::move(aug_names));

    TestResult out;
    out.name = "ramsey_reset";
    out.df1 = static_cast<int>(q);
    out.df2 = static_cast<int>(T - k - q);
    out.statistic = ((base.ssr - full.ssr) / static_cast<double>(q)) /
                    (full.ssr / static_cast<double>(out.df2));
    if (out.statistic < 0.0) out.statistic = 0.0;  // guard against roundoff
    out.p_value = stats::f_sf(out.statistic, out.df1, out.df2);
    out.reject_at_5pct = out.p_value < 0.05;
    return out;
}

CollinearityReport collinearity_report(const Eigen::MatrixXd& X,
                                       const std::vector<std::string>& names) {
    const Eigen::Index T = X.rows();
    const Eigen::Index k = X.cols();
    if (k < 2) throw ValidationError("collinearity_report: need at least 2 columns");
    if (static_cast<size_t>(k) != names.size())
        throw ValidationError("collinearity_report: name count mismatch");

    for (Eigen::Index j = 0; j < k; ++j) {
        const double sd = std::sqrt((X.col(j).array() - X.col(j).mean()).square().sum());
        if (!(sd > 0.0))
            throw ValidationError("collinearity_report: constant column '" + names[j] + "'");
    }

    CollinearityReport out;
    out.names = names;

    out.correlation.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        out.correlation(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < k; ++j) {
            std::vector<double> a(X.col(i).data(), X.col(i).data() + T);
            std::vector<double> b(X.col(j).data(), X.col(j).data() + T);
            const double r = stats::pearson_corr(a, b);
            out.correlation(i, j) = r;
            out.correlation(j, i) = r;
        }
    }

    // VIF_j from the auxiliary regression of column j on the others (with
    // intercept).
    out.vif.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::MatrixXd others(T, k);  // intercept + k-1 columns
        others.col(0).setOnes();
        Eigen::Index c = 1;
        std::vector<std::string> aux_names{"const"};
        for (Eigen::Index i = 0; i < k; ++i) {
            if (i == j) continue;
            others.col(c++) = X.col(i);
            aux_names.push_back(names[i]);
        }
        const auto aux = ols::ols_fit(X.col(j), others, std::move(aux_names));
        const double r2 = std::min(aux.r2, 1.0 - 1e-14);
        out.vif[j] = 1.0 / (1.0 - r2);
    }

    // Belsley: intercept column included, every column scaled to unit length.
    Eigen::MatrixXd B(T, k + 1);
    B.col(0).setOnes();
    B.rightCols(k) = X;
    out.belsley_names.push_back("const");
    for (const auto& n : names) out.belsley_names.push_back(n);
    for (Eigen::Index j = 0; j < k + 1; ++j) B.col(j) /= B.col(j).norm();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();  // descending
    const Eigen::MatrixXd V = svd.matrixV();
    const Eigen::Index m = sv.size();

    out.condition_indices.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double s = sv(i);
        out.condition_indices[i] =
            (s > 0.0) ? sv(0) / s : std::numeric_limits<double>::infinity();
    }

    out.variance_decomposition.resize(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {  // coefficient j
        double total = 0.0;
        Eigen::VectorXd phi(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double s = sv(i);
            phi(i) = (s > 0.0) ? (V(j, i) * V(j, i)) / (s * s)
                               : std::numeric_limits<double>::infinity();
            total += phi(i);
        }
        for (Eigen::Index i = 0; i < m; ++i) out.variance_decomposition(i, j) = phi(i) / total;
    }
    return out;
}

}  // namespace drix::diag
