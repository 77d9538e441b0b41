#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace drix::prep {
struct AlignedDataset;
}

namespace drix::ols {

struct RegressionFit {
    std::vector<std::string> names;  // coefficient names, intercept first
    Eigen::VectorXd coef;
    Eigen::VectorXd stderrs;
    Eigen::VectorXd t_stat;
    Eigen::VectorXd p_value;
    Eigen::VectorXd residuals;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double aic = 0.0;
    double durbin_watson = 0.0;
    double ssr = 0.0;
    int n_obs = 0;
    int k_params = 0;

    int index_of(const std::string& name) const;  // -1 if absent
};

struct OlsOptions {
    double condition_cap = 1e10;  // above this the design is declared singular
};

/// Least squares through a Householder QR decomposition. The design matrix is
/// expected to carry its intercept column explicitly. Standard errors come
/// from sigma^2 (X'X)^-1 with sigma^2 = SSR/(T-k); p-values are two-sided
/// Student-t with T-k degrees of freedom; aic = T ln(SSR/T) + 2k.
RegressionFit ols_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                      std::vector<std::string> names, const OlsOptions& opts = {});

/// Table-note convention: a < 1%, b < 5%, c < 10%, empty otherwise.
std::string significance_stars(double p_value);

/// Full spread specification: intercept, then every proxy column, then every
/// control column, in dataset order.
RegressionFit fit_spread_model(const prep::AlignedDataset& data, const OlsOptions& opts = {});

/// Intercept plus the named columns in the given order; errors on a missing
/// name. Used for the single-proxy and robustness variants.
RegressionFit fit_columns(const prep::AlignedDataset& data,
                          const std::vector<std::string>& column_names,
                          const OlsOptions& opts = {});

}  // namespace drix::ols
