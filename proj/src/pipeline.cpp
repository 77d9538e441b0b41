#include "drix/pipeline.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "drix/errors.hpp"
#include "drix/stats.hpp"

namespace drix::pipeline {

namespace {

// DRIX_LOG=debug enables stage tracing on stderr.
bool stage_tracing() {
    static const bool enabled = [] {
        const char* level = std::getenv("DRIX_LOG");
        return level && std::string_view(level) == "debug";
    }();
    return enabled;
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    if (stage_tracing()) std::cerr << "[drix] stage: " << name << "\n";
    try {
        return fn();
    } catch (const IoError& e) {
        throw IoError(std::string("stage '") + name + "': " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(std::string("stage '") + name + "': " + e.what());
    } catch (const std::exception& e) {
        throw ValidationError(std::string("stage '") + name + "': " + e.what());
    }
}

}  // namespace

std::vector<ColumnChain> default_controls() {
    return {{"dCPI", "cpi", {"pct"}}, {"dIPI", "ipi", {"pct"}}, {"dFFR", "ffr", {"pct"}}};
}

std::vector<ColumnChain> robustness_controls() {
    return {{"dPPI", "ppi", {"pct"}}, {"dlnGDP", "gdp", {"dlog"}}, {"dFFR", "ffr", {"pct"}}};
}

AssembledData assemble(const std::vector<ingest::FirmPanel>& firms,
                       const ingest::ZRatioTable& z_ratios, const ingest::RatingsSeries& ratings,
                       const std::map<std::string, ingest::MacroTable>& macros,
                       const ingest::MacroTable& spreads, const StageOptions& opts) {
    if (firms.empty()) throw ValidationError("assemble: no firm panels");

    std::map<std::string, proxies::FirmProxySeries> dd_map, z_map, cfv_map;
    for (const auto& panel : firms) {
        dd_map[panel.firm_id] = proxies::firm_dd_series(panel);
        z_map[panel.firm_id] = proxies::firm_z_series(panel, z_ratios, opts.z_coefficients);
        cfv_map[panel.firm_id] = proxies::firm_cfv_series(panel, opts.cfv);
    }

    AssembledData out;
    out.cfv = proxies::aggregate_firms(cfv_map, opts.firm_weights, "CFv");
    out.dd = proxies::aggregate_firms(dd_map, opts.firm_weights, "DD");
    out.z = proxies::aggregate_firms(z_map, opts.firm_weights, "Z");

    const auto y = prep::make_source("dYS", prep::to_monthly(spreads), {"pct"});

    std::vector<prep::SourceSeries> proxy_sources;
    proxy_sources.push_back(prep::make_source("CFv", out.cfv, {}));
    proxy_sources.push_back(prep::make_source("dDD", out.dd, {"pct"}));
    proxy_sources.push_back(prep::make_source("dZ", out.z, {"pct"}));
    {
        prep::SourceSeries ir;
        ir.name = "dIR";
        ir.data.series_name = "ratings";
        ir.data.native_frequency = ingest::Frequency::annual;
        for (const auto& [year, pct] : ratings.observations)
            ir.data.observations.emplace_back(YearMonth{year, 12}, pct);
        ir.transforms = {"log", "pct"};
        proxy_sources.push_back(std::move(ir));
    }

    std::vector<prep::SourceSeries> control_sources;
    for (const auto& chain : opts.controls) {
        auto it = macros.find(chain.macro_key);
        if (it == macros.end())
            throw ValidationError("assemble: missing macro series '" + chain.macro_key + "'");
        prep::SourceSeries src;
        src.name = chain.column_name;
        src.data = it->second;
        src.transforms = chain.transforms;
        control_sources.push_back(std::move(src));
    }

    prep::BuildConfig build;
    build.spline = opts.spline;
    build.min_aligned_months = opts.min_aligned_months;
    build.y_lag = 1;
    out.eq2 = prep::build_aligned(y, proxy_sources, control_sources, build);
    build.y_lag = 0;
    out.eq4 = prep::build_aligned(y, proxy_sources, control_sources, build);
    return out;
}

PosthocStage build_posthoc(const AssembledData& data, const ols::RegressionFit& eq2_fit,
                           const StageOptions& opts) {
    PosthocStage out;
    out.selection = posthoc::select_proxies(eq2_fit, data.eq2, opts.alpha);

    // Covariances over the eq2 window (the columns that produced the betas).
    std::vector<std::span<const double>> eq2_cols;
    std::vector<double> betas;
    size_t principal_idx = 0;
    for (size_t j = 0; j < out.selection.significant.size(); ++j) {
        const auto& name = out.selection.significant[j];
        const auto* col = data.eq2.find(name);
        if (!col) throw ValidationError("build_posthoc: column '" + name + "' vanished");
        eq2_cols.emplace_back(col->values);
        betas.push_back(eq2_fit.coef(eq2_fit.index_of(name)));
        if (name == out.selection.principal) principal_idx = j;
    }
    const auto weights =
        posthoc::lw_weights(data.eq2.y.values, eq2_cols, betas, principal_idx);

    std::vector<posthoc::IndexMember> members;
    const double cov_principal =
        stats::sample_cov(data.eq2.y.values, eq2_cols[principal_idx]);
    for (size_t j = 0; j < weights.size(); ++j) {
        posthoc::IndexMember m;
        m.name = out.selection.significant[j];
        m.beta = betas[j];
        m.cov_ratio = stats::sample_cov(data.eq2.y.values, eq2_cols[j]) / cov_principal;
        m.weight = weights[j];
        members.push_back(std::move(m));
    }

    // The index itself spans the unlagged window (one extra leading month).
    std::vector<std::span<const double>> eq4_cols;
    for (const auto& name : out.selection.significant) {
        const auto* col = data.eq4.find(name);
        if (!col) throw ValidationError("build_posthoc: eq4 column '" + name + "' missing");
        eq4_cols.emplace_back(col->values);
    }
    out.index = posthoc::build_index(members, data.eq4.dates, eq4_cols, opts.delta_mode);

    // The index members are already monthly changes, so the spread change is
    // regressed on rho itself; the differenced series stays available for
    // export and plotting.
    out.eq4_fit = posthoc::index_regression(data.eq4.y.values, out.index.series, "d_rho");
    return out;
}

Eigen::MatrixXd design_matrix(const prep::AlignedDataset& data,
                              const std::vector<std::string>& column_names) {
    const auto T = static_cast<Eigen::Index>(data.rows());
    Eigen::MatrixXd X(T, static_cast<Eigen::Index>(column_names.size()) + 1);
    X.col(0).setOnes();
    for (size_t j = 0; j < column_names.size(); ++j) {
        const auto* col = data.find(column_names[j]);
        if (!col) throw ValidationError("design_matrix: missing column '" + column_names[j] + "'");
        for (Eigen::Index t = 0; t < T; ++t) X(t, static_cast<Eigen::Index>(j) + 1) = col->values[t];
    }
    return X;
}

namespace {

std::vector<std::string> control_names(const prep::AlignedDataset& data) {
    std::vector<std::string> names;
    for (const auto& c : data.controls) names.push_back(c.name);
    return names;
}

std::vector<std::string> all_column_names(const prep::AlignedDataset& data) {
    std::vector<std::string> names;
    for (const auto& c : data.proxies) names.push_back(c.name);
    for (const auto& c : data.controls) names.push_back(c.name);
    return names;
}

}  // namespace

RunReport run_stages(const std::vector<ingest::FirmPanel>& firms,
                     const ingest::ZRatioTable& z_ratios, const ingest::RatingsSeries& ratings,
                     const std::map<std::string, ingest::MacroTable>& macros,
                     const ingest::MacroTable& spreads, const PipelineConfig& config) {
    RunReport report;
    report.version = "drix 0.1.0";

    const auto data = stage("proxies/alignment", [&] {
        return assemble(firms, z_ratios, ratings, macros, spreads, config.stages);
    });
    report.eq2_data = data.eq2;

    if (config.run_unit_roots) {
        stage("stationarity", [&] {
            auto run_both = [&](const std::string& name, const std::vector<double>& values) {
                UnitRootEntry entry;
                entry.column = name;
                entry.adf = prep::unit_root_test(values, prep::UnitRootMethod::adf,
                                                 config.unit_root_max_lag);
                entry.pp = prep::unit_root_test(values, prep::UnitRootMethod::phillips_perron,
                                                config.pp_bandwidth);
                report.unit_roots.push_back(std::move(entry));
            };
            run_both(data.eq2.y.name, data.eq2.y.values);
            for (const auto& c : data.eq2.proxies) run_both(c.name, c.values);
            for (const auto& c : data.eq2.controls) run_both(c.name, c.values);
            return 0;
        });
    }

    stage("single-proxy fits", [&] {
        for (const auto& proxy : data.eq2.proxies) {
            std::vector<std::string> cols{proxy.name};
            for (const auto& name : control_names(data.eq2)) cols.push_back(name);
            report.single_proxy_fits.push_back(ols::fit_columns(data.eq2, cols));
        }
        return 0;
    });

    stage("full fit", [&] {
        report.full_fit = ols::fit_spread_model(data.eq2);
        const auto X = design_matrix(data.eq2, all_column_names(data.eq2));
        report.full_bg = diag::breusch_godfrey(report.full_fit, X, config.stages.bg_lags);
        return 0;
    });

    if (config.run_robustness) {
        stage("robustness fit", [&] {
            StageOptions robust = config.stages;
            robust.controls = robustness_controls();
            const auto rdata = assemble(firms, z_ratios, ratings, macros, spreads, robust);
            report.robustness_fit = ols::fit_spread_model(rdata.eq2);
            const auto X = design_matrix(rdata.eq2, all_column_names(rdata.eq2));
            report.robustness_bg =
                diag::breusch_godfrey(*report.robustness_fit, X, config.stages.bg_lags);
            return 0;
        });
    }

    stage("collinearity", [&] {
        const auto names = all_column_names(data.eq2);
        const auto X = design_matrix(data.eq2, names);
        report.collinearity = diag::collinearity_report(X.rightCols(X.cols() - 1), names);
        return 0;
    });

    const auto posthoc_stage = stage("posthoc index", [&] {
        return build_posthoc(data, report.full_fit, config.stages);
    });
    report.selection = posthoc_stage.selection;
    report.index = posthoc_stage.index;
    report.eq4_fit = posthoc_stage.eq4_fit;

    stage("index diagnostics", [&] {
        const auto T = static_cast<Eigen::Index>(data.eq4.rows());
        Eigen::VectorXd y(T);
        Eigen::MatrixXd X(T, 2);
        for (Eigen::Index t = 0; t < T; ++t) {
            y(t) = data.eq4.y.values[t];
            X(t, 0) = 1.0;
            X(t, 1) = report.index.series[t];
        }
        report.eq4_bg = diag::breusch_godfrey(report.eq4_fit, X, config.stages.bg_lags);
        report.eq4_reset = diag::ramsey_reset(y, X, config.stages.reset_powers);
        return 0;
    });

    stage("regimes", [&] {
        for (const auto& window : config.stages.regime_windows) {
            RegimeResult result;
            result.label = window.label;
            const auto mask = regimes::crisis_mask(data.eq4.dates, window);
            result.fit = regimes::regime_regression(data.eq4.y.values, report.index.series, mask);

            const auto T = static_cast<Eigen::Index>(data.eq4.rows());
            Eigen::VectorXd y(T);
            Eigen::MatrixXd X(T, result.fit.collapsed ? 2 : 3);
            for (Eigen::Index t = 0; t < T; ++t) {
                y(t) = data.eq4.y.values[t];
                X(t, 0) = 1.0;
                if (result.fit.collapsed) {
                    X(t, 1) = report.index.series[t];
                } else {
                    X(t, 1) = mask[t] * report.index.series[t];
                    X(t, 2) = (1.0 - mask[t]) * report.index.series[t];
                }
            }
            result.bg = diag::breusch_godfrey(result.fit.fit, X, config.stages.bg_lags);
            result.reset = diag::ramsey_reset(y, X, config.stages.reset_powers);
            report.regime_results.push_back(std::move(result));
        }
        return 0;
    });

    return report;
}

RunReport run_pipeline(const PipelineConfig& config) {
    auto firms = stage("ingest", [&] {
        auto panels = ingest::load_firm_panel(config.firms_path, config.ingest);
        ingest::attach_prices(panels, config.prices_path);
        return panels;
    });
    const auto z_ratios = stage("ingest", [&] { return ingest::load_z_ratios(config.zratios_path); });
    const auto ratings =
        stage("ingest", [&] { return ingest::load_ratings(config.ratings_path, config.ingest); });
    const auto spreads = stage("ingest", [&] {
        return ingest::load_macro_table(config.spreads_path, ingest::Frequency::monthly, "spreads");
    });

    std::map<std::string, ingest::MacroTable> macros;
    stage("ingest", [&] {
        for (const auto& [key, path] : config.macro_paths) {
            ingest::Frequency freq = ingest::Frequency::monthly;
            if (auto it = config.macro_frequencies.find(key); it != config.macro_frequencies.end())
                freq = it->second;
            else if (key == "gdp")
                freq = ingest::Frequency::quarterly;
            macros[key] = ingest::load_macro_table(path, freq, key);
        }
        return 0;
    });

    PipelineConfig effective = config;
    if (!config.weights_path.empty())
        effective.stages.firm_weights =
            stage("ingest", [&] { return ingest::load_weights(config.weights_path); });

    return run_stages(firms, z_ratios, ratings, macros, spreads, effective);
}

}  // namespace drix::pipeline
