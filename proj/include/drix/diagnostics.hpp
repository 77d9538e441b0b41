#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "drix/ols.hpp"

namespace drix::diag {

struct TestResult {
    std::string name;
    double statistic = 0.0;
    int df1 = 0;
    int df2 = 0;  // 0 for chi-square tests
    double p_value = 1.0;
    bool reject_at_5pct = false;
};

/// Breusch-Godfrey LM serial-correlation test: residuals regressed on the
/// original design plus `lags` lagged residuals (pre-sample lags zero);
/// LM = T * R^2 against chi-square(lags).
TestResult breusch_godfrey(const ols::RegressionFit& fit, const Eigen::MatrixXd& X, int lags);

/// Ramsey RESET: F-test of powers of the fitted values added to the design.
/// Powers must be a subset of {2,3,4}.
TestResult ramsey_reset(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                        const std::vector<int>& powers);

struct CollinearityReport {
    std::vector<std::string> names;        // data columns, intercept excluded
    Eigen::MatrixXd correlation;           // Pearson, unit diagonal
    std::vector<double> vif;               // 1/(1-R^2_j)
    std::vector<std::string> belsley_names;  // "const" + data columns
    std::vector<double> condition_indices;   // ascending, first is 1
    Eigen::MatrixXd variance_decomposition;  // rows: indices, cols: coefficients
};

/// Correlation matrix, VIFs, and the Belsley condition-index / variance-
/// decomposition table. X carries the data columns only; the intercept is
/// appended internally before unit-length scaling, per Belsley's treatment.
CollinearityReport collinearity_report(const Eigen::MatrixXd& X,
                                       const std::vector<std::string>& names);

}  // namespace drix::diag
