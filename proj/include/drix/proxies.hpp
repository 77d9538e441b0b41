#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "drix/dates.hpp"
#include "drix/ingest.hpp"

namespace drix::proxies {

/// Aggregated monthly proxy series (levels, pre-differencing).
struct ProxySeries {
    std::string name;  // CFv | DD | Z | IR
    std::vector<std::pair<YearMonth, double>> observations;
};

/// Per-firm proxy values; nullopt marks a month flagged undefined (zero
/// volatility, near-zero cash-flow mean) that aggregation must skip.
struct FirmProxySeries {
    std::vector<std::pair<YearMonth, std::optional<double>>> values;
};

/// Sample standard deviation of within-month daily log returns.
/// A single return (two prices) carries no dispersion information and yields
/// 0, which downstream flags the month as DD-undefined.
double monthly_stock_volatility(std::span<const double> closes);

/// (ln assets - ln liabilities) / monthly volatility.
double distance_to_default(double total_assets, double total_liabilities, double monthly_vol);

/// Altman's discriminant score. Coefficients default to the original 1968
/// weights and are configurable for robustness runs.
struct ZCoefficients {
    double c1 = 1.2, c2 = 1.4, c3 = 3.3, c4 = 0.6, c5 = 1.0;
};
double altman_z(const ingest::ZInputs& inputs, const ZCoefficients& coef = {});

/// Coefficient of variation of a cash-flow window: sample sd / |mean|.
double cash_flow_volatility(std::span<const double> window, double mean_epsilon = 1e-9);

struct CfvOptions {
    int window_months = 12;
    double mean_epsilon = 1e-9;
};

// Per-firm series builders. Months the proxy cannot be computed for are
// flagged (nullopt), never imputed.
FirmProxySeries firm_dd_series(const ingest::FirmPanel& panel);
FirmProxySeries firm_z_series(const ingest::FirmPanel& panel, const ingest::ZRatioTable& ratios,
                              const ZCoefficients& coef = {});
FirmProxySeries firm_cfv_series(const ingest::FirmPanel& panel, const CfvOptions& opts = {});

/// Weighted cross-firm average, renormalized each month over the firms with a
/// defined value. An empty weight map means equal weights.
ProxySeries aggregate_firms(const std::map<std::string, FirmProxySeries>& per_firm,
                            const std::map<std::string, double>& weights, std::string name);

}  // namespace drix::proxies
