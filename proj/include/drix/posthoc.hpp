#pragma once

#include <span>
#include <string>
#include <vector>

#include "drix/dates.hpp"
#include "drix/ols.hpp"
#include "drix/prep.hpp"

namespace drix::posthoc {

struct SelectedProxies {
    std::vector<std::string> significant;  // dataset order
    std::string principal;
    std::vector<double> single_proxy_aic;  // AIC per significant proxy, same order
};

/// Keeps the proxies significant in the full-specification fit (p < alpha) and
/// picks the principal one by the AIC of its intercept-plus-proxy regression.
SelectedProxies select_proxies(const ols::RegressionFit& full_fit, const prep::AlignedDataset& data,
                               double alpha = 0.10);

/// Covariance-ratio weights: weight_j = beta_j * Cov(y, x_j) / Cov(y, x_1).
/// Sample covariances with the T-1 denominator; the constant cancels in the
/// ratio. principal_index addresses columns of x_sig.
std::vector<double> lw_weights(std::span<const double> y,
                               const std::vector<std::span<const double>>& x_sig,
                               const std::vector<double>& betas, size_t principal_index);

struct IndexMember {
    std::string name;
    double beta = 0.0;
    double cov_ratio = 0.0;
    double weight = 0.0;  // beta * cov_ratio
};

enum class DeltaMode { first_difference, pct_change };

struct PosthocIndex {
    std::string principal;
    std::vector<IndexMember> members;
    std::vector<YearMonth> dates;
    std::vector<double> series;        // rho_t
    std::vector<double> delta_series;  // one shorter than series
    DeltaMode delta_mode = DeltaMode::first_difference;
};

/// rho_t = sum_j weight_j * x_jt over the member columns; delta_series is the
/// first difference by default (rho can cross zero, so percentage change is
/// opt-in and guards against zero levels).
PosthocIndex build_index(const std::vector<IndexMember>& members,
                         const std::vector<YearMonth>& dates,
                         const std::vector<std::span<const double>>& columns,
                         DeltaMode delta_mode = DeltaMode::first_difference);

/// Two-parameter fit of the yield-spread change on the index.
ols::RegressionFit index_regression(std::span<const double> delta_ys,
                                    std::span<const double> delta_rho,
                                    const std::string& rho_name = "d_rho");

}  // namespace drix::posthoc
