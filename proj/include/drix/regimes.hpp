#pragma once

#include <span>
#include <string>
#include <vector>

#include "drix/dates.hpp"
#include "drix/ols.hpp"

namespace drix::regimes {

struct RegimeWindow {
    std::string label;
    YearMonth start;
    YearMonth end;  // inclusive
};

/// Builds the default presets: the sub-prime window, plus a dot-com window
/// whose exact bounds the source data never pins down (kept as a preset, never
/// asserted).
RegimeWindow subprime_window();
RegimeWindow dotcom_window();

/// 1 inside the window (inclusive), 0 outside. Errors when the window misses
/// the sample entirely.
std::vector<double> crisis_mask(const std::vector<YearMonth>& dates, const RegimeWindow& window);

struct RegimeFit {
    ols::RegressionFit fit;
    bool collapsed = false;       // one regime was empty; single-slope fit
    std::string crisis_name;      // coefficient name for the crisis slope ("" if dropped)
    std::string non_crisis_name;  // coefficient name for the non-crisis slope ("" if dropped)
    int n_crisis = 0;
    int n_non_crisis = 0;
};

/// Interaction regression: intercept, mask*d_rho (crisis slope) and
/// (1-mask)*d_rho (non-crisis slope). A regime with zero observations
/// collapses to the single-slope model; a regime with fewer than 12
/// observations is rejected as too thin.
RegimeFit regime_regression(std::span<const double> delta_ys, std::span<const double> delta_rho,
                            std::span<const double> mask);

}  // namespace drix::regimes
