#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drix/diagnostics.hpp"
#include "drix/ingest.hpp"
#include "drix/ols.hpp"
#include "drix/posthoc.hpp"
#include "drix/prep.hpp"
#include "drix/proxies.hpp"
#include "drix/regimes.hpp"

namespace drix::pipeline {

/// One control column: output name, macro series key, transform chain.
struct ColumnChain {
    std::string column_name;
    std::string macro_key;
    std::vector<std::string> transforms;
};

std::vector<ColumnChain> default_controls();      // dCPI, dIPI, dFFR (pct)
std::vector<ColumnChain> robustness_controls();   // dPPI (pct), dlnGDP (dlog), dFFR (pct)

struct StageOptions {
    proxies::CfvOptions cfv;
    proxies::ZCoefficients z_coefficients;
    prep::SplineOptions spline;
    std::map<std::string, double> firm_weights;  // empty = equal weights
    std::vector<ColumnChain> controls = default_controls();
    double alpha = 0.10;
    int bg_lags = 12;
    std::vector<int> reset_powers{2, 3};
    posthoc::DeltaMode delta_mode = posthoc::DeltaMode::first_difference;
    std::vector<regimes::RegimeWindow> regime_windows{regimes::subprime_window()};
    int min_aligned_months = 24;
};

/// Proxy aggregation plus alignment: the lagged design for the full spread
/// model and the unlagged design (one extra leading month) that the index
/// regression runs on.
struct AssembledData {
    proxies::ProxySeries cfv, dd, z;  // aggregated monthly levels
    prep::AlignedDataset eq2;         // with dYS_lag1
    prep::AlignedDataset eq4;         // without the lag column
};

AssembledData assemble(const std::vector<ingest::FirmPanel>& firms,
                       const ingest::ZRatioTable& z_ratios, const ingest::RatingsSeries& ratings,
                       const std::map<std::string, ingest::MacroTable>& macros,
                       const ingest::MacroTable& spreads, const StageOptions& opts);

/// Proxy selection, Lubotsky-Wittenberg weights (covariances over the eq2
/// window), index construction over the eq4 window, and the index regression.
struct PosthocStage {
    posthoc::SelectedProxies selection;
    posthoc::PosthocIndex index;
    ols::RegressionFit eq4_fit;
};

PosthocStage build_posthoc(const AssembledData& data, const ols::RegressionFit& eq2_fit,
                           const StageOptions& opts);

// ---- full run -----------------------------------------------------------------

struct PipelineConfig {
    std::string firms_path, prices_path, zratios_path, ratings_path, spreads_path;
    std::map<std::string, std::string> macro_paths;  // key -> path (cpi, ipi, ffr, ...)
    std::map<std::string, ingest::Frequency> macro_frequencies;  // default monthly; gdp quarterly
    std::string weights_path;                        // optional
    std::string output_dir = ".";
    ingest::IngestOptions ingest;
    StageOptions stages;
    bool run_robustness = true;
    bool run_unit_roots = true;
    int unit_root_max_lag = 12;
    int pp_bandwidth = -1;  // negative = automatic
};

struct UnitRootEntry {
    std::string column;
    prep::UnitRootResult adf;
    prep::UnitRootResult pp;
};

struct RegimeResult {
    std::string label;
    regimes::RegimeFit fit;
    diag::TestResult bg;
    diag::TestResult reset;
};

struct RunReport {
    std::string version;
    std::string config_echo;
    prep::AlignedDataset eq2_data;
    std::vector<ols::RegressionFit> single_proxy_fits;  // Table-1 columns 1..4
    ols::RegressionFit full_fit;                        // column 5
    std::optional<ols::RegressionFit> robustness_fit;   // column 6
    diag::TestResult full_bg;
    std::optional<diag::TestResult> robustness_bg;
    diag::CollinearityReport collinearity;
    std::vector<UnitRootEntry> unit_roots;
    posthoc::SelectedProxies selection;
    posthoc::PosthocIndex index;
    ols::RegressionFit eq4_fit;
    diag::TestResult eq4_bg;
    diag::TestResult eq4_reset;
    std::vector<RegimeResult> regime_results;
};

/// Runs ingest -> proxies -> alignment -> fits -> diagnostics -> index ->
/// regimes, wrapping any stage failure with the stage name.
RunReport run_pipeline(const PipelineConfig& config);

/// The same stages on already-loaded inputs (used by the generator's oracle
/// and the test-suite loops, which never touch the filesystem).
RunReport run_stages(const std::vector<ingest::FirmPanel>& firms,
                     const ingest::ZRatioTable& z_ratios, const ingest::RatingsSeries& ratings,
                     const std::map<std::string, ingest::MacroTable>& macros,
                     const ingest::MacroTable& spreads, const PipelineConfig& config);

/// Design matrix (intercept first) of a fitted dataset, for the diagnostics
/// battery.
Eigen::MatrixXd design_matrix(const prep::AlignedDataset& data,
                              const std::vector<std::string>& column_names);

}  // namespace drix::pipeline
