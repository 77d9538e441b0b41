#include "drix/posthoc.hpp"

#include <cmath>
#include <sstream>

#include "drix/errors.hpp"
#include "drix/stats.hpp"

namespace drix::posthoc {

SelectedProxies select_proxies(const ols::RegressionFit& full_fit, const prep::AlignedDataset& data,
                               double alpha) {
    SelectedProxies out;
    for (const auto& proxy : data.proxies) {
        const int idx = full_fit.index_of(proxy.name);
        if (idx < 0)
            throw ValidationError("select_proxies: fit carries no coefficient for proxy '" +
                                  proxy.name + "'");
        if (full_fit.p_value(idx) < alpha) out.significant.push_back(proxy.name);
    }
    if (out.significant.empty())
        throw ValidationError("select_proxies: no proxy is significant at alpha, cannot build index");

    double best_aic = std::numeric_limits<double>::infinity();
    for (const auto& name : out.significant) {
        const auto fit = ols::fit_columns(data, {name});
        out.single_proxy_aic.push_back(fit.aic);
        if (fit.aic < best_aic) {
            best_aic = fit.aic;
            out.principal = name;
        }
    }
    return out;
}

std::vector<double> lw_weights(std::span<const double> y,
                               const std::vector<std::span<const double>>& x_sig,
                               const std::vector<double>& betas, size_t principal_index) {
    if (x_sig.empty()) throw ValidationError("lw_weights: no proxy columns");
    if (x_sig.size() != betas.size())
        throw ValidationError("lw_weights: beta count does not match column count");
    if (principal_index >= x_sig.size())
        throw ValidationError("lw_weights: principal index out of range");
    for (const auto& col : x_sig)
        if (col.size() != y.size())
            throw ValidationError("lw_weights: column length does not match y");

    const double cov_principal = stats::sample_cov(y, x_sig[principal_index]);
    // Scale-free conditioning check on the principal covariance.
    const double sd_y = stats::sample_sd(y);
    const double sd_p = stats::sample_sd(x_sig[principal_index]);
    if (!(sd_y > 0.0) || !(sd_p > 0.0) ||
        std::fabs(cov_principal) / (sd_y * sd_p) <= 1e-12)
        throw NumericError(
            "lw_weights: principal proxy covariance with y is numerically zero, index undefined");

    std::vector<double> weights(x_sig.size());
    for (size_t j = 0; j < x_sig.size(); ++j) {
        const double cov_j =
            (j == principal_index) ? cov_principal : stats::sample_cov(y, x_sig[j]);
        weights[j] = betas[j] * (cov_j / cov_principal);
    }
    return weights;
}

PosthocIndex build_index(const std::vector<IndexMember>& members,
                         const std::vector<YearMonth>& dates,
                         const std::vector<std::span<const double>>& columns,
                         DeltaMode delta_mode) {
    if (members.empty()) throw ValidationError("build_index: no members");
    if (members.size() != columns.size())
        throw ValidationError("build_index: member/column count mismatch");
    for (const auto& col : columns)
        if (col.size() != dates.size())
            throw ValidationError("build_index: column length does not match dates");

    PosthocIndex out;
    out.members = members;
    out.delta_mode = delta_mode;
    out.dates = dates;
    for (const auto& m : members)
        if (m.cov_ratio == 1.0 && out.principal.empty()) out.principal = m.name;
    if (out.principal.empty()) out.principal = members.front().name;

    out.series.assign(dates.size(), 0.0);
    for (size_t j = 0; j < columns.size(); ++j)
        for (size_t t = 0; t < dates.size(); ++t) out.series[t] += members[j].weight * columns[j][t];

    out.delta_series.reserve(out.series.size() - 1);
    for (size_t t = 1; t < out.series.size(); ++t) {
        if (delta_mode == DeltaMode::first_difference) {
            out.delta_series.push_back(out.series[t] - out.series[t - 1]);
        } else {
            if (out.series[t - 1] == 0.0)
                throw NumericError("build_index: zero index level at " + dates[t - 1].str() +
                                   ", percentage change undefined");
            out.delta_series.push_back(100.0 * (out.series[t] - out.series[t - 1]) /
                                       out.series[t - 1]);
        }
    }
    return out;
}

ols::RegressionFit index_regression(std::span<const double> delta_ys,
                                    std::span<const double> delta_rho,
                                    const std::string& rho_name) {
    if (delta_ys.size() != delta_rho.size())
        throw ValidationError("index_regression: series lengths differ");
    if (delta_ys.size() < 24)
        throw ValidationError("index_regression: need at least 24 observations");

    const auto T = static_cast<Eigen::Index>(delta_ys.size());
    Eigen::VectorXd y(T);
    Eigen::MatrixXd X(T, 2);
    for (Eigen::Index t = 0; t < T; ++t) {
        y(t) = delta_ys[t];
        X(t, 0) = 1.0;
        X(t, 1) = delta_rho[t];
    }
    return ols::ols_fit(y, X, {"const", rho_name});
}

}  // namespace drix::posthoc
