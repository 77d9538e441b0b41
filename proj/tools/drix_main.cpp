#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "drix/config.hpp"
#include "drix/csv.hpp"
#include "drix/errors.hpp"
#include "drix/pipeline.hpp"
#include "drix/report.hpp"
#include "drix/synth.hpp"

namespace fs = std::filesystem;
using namespace drix;

namespace {

struct CommonInputs {
    std::string firms, prices, zratios, ratings, spreads, weights;
    std::map<std::string, std::string> macros;  // cpi=path etc.
};

void add_input_options(CLI::App* cmd, CommonInputs& in, bool with_spreads) {
    cmd->add_option("--firms", in.firms, "firms.csv path")->required();
    cmd->add_option("--prices", in.prices, "prices.csv path")->required();
    cmd->add_option("--zratios", in.zratios, "zratios.csv path")->required();
    cmd->add_option("--ratings", in.ratings, "ratings.csv path")->required();
    cmd->add_option("--weights", in.weights, "optional weights.csv path");
    if (with_spreads) {
        cmd->add_option("--spreads", in.spreads, "spreads.csv path")->required();
        cmd->add_option("--macro", in.macros,
                        "macro series as key=path (cpi, ipi, ffr; plus ppi, gdp for robustness)")
            ->required();
    }
}

pipeline::PipelineConfig config_from_inputs(const CommonInputs& in) {
    pipeline::PipelineConfig c;
    c.firms_path = in.firms;
    c.prices_path = in.prices;
    c.zratios_path = in.zratios;
    c.ratings_path = in.ratings;
    c.spreads_path = in.spreads;
    c.weights_path = in.weights;
    c.macro_paths = in.macros;
    return c;
}

int dispatch(int argc, char** argv) {
    CLI::App app{
        "drix: default-risk proxy construction, spread regressions, and the post-hoc "
        "composite index"};
    app.require_subcommand(1);

    // ---- synth ----------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic fixture directory");
    std::string synth_config_path, synth_out = "synth_out";
    std::uint64_t synth_seed = 0;
    bool synth_seed_set = false;
    synth_cmd->add_option("--config", synth_config_path, "config file with a [synth] section");
    synth_cmd->add_option("--out", synth_out, "output directory")->required();
    synth_cmd->add_option("--seed", synth_seed, "override the seed")
        ->each([&](const std::string&) { synth_seed_set = true; });
    synth_cmd->callback([&] {
        synth::SynthConfig cfg;
        if (!synth_config_path.empty())
            cfg = config::load_synth_config(config::parse_file(synth_config_path));
        if (synth_seed_set) cfg.seed = synth_seed;
        const auto out = synth::generate(cfg);
        synth::write_fixture(out, synth_out);
        std::cout << "wrote fixture to " << synth_out << " (seed " << cfg.seed << ", "
                  << cfg.n_firms << " firms)\n";
    });

    // ---- proxies --------------------------------------------------------------
    auto* proxies_cmd =
        app.add_subcommand("proxies", "compute aggregated proxy level series (CFv, DD, Z, IR)");
    CommonInputs proxy_in;
    add_input_options(proxies_cmd, proxy_in, false);
    std::string proxies_out = "proxies.csv";
    int cfv_window = 12;
    proxies_cmd->add_option("--out", proxies_out, "output csv (date,CFv,DD,Z,IR)");
    proxies_cmd->add_option("--cfv-window", cfv_window, "rolling cash-flow window in months");
    proxies_cmd->callback([&] {
        auto panels = ingest::load_firm_panel(proxy_in.firms);
        ingest::attach_prices(panels, proxy_in.prices);
        const auto zr = ingest::load_z_ratios(proxy_in.zratios);
        const auto ratings = ingest::load_ratings(proxy_in.ratings);
        pipeline::StageOptions opts;
        opts.cfv.window_months = cfv_window;
        if (!proxy_in.weights.empty()) opts.firm_weights = ingest::load_weights(proxy_in.weights);

        std::map<std::string, proxies::FirmProxySeries> dd_map, z_map, cfv_map;
        for (const auto& panel : panels) {
            dd_map[panel.firm_id] = proxies::firm_dd_series(panel);
            z_map[panel.firm_id] = proxies::firm_z_series(panel, zr, opts.z_coefficients);
            cfv_map[panel.firm_id] = proxies::firm_cfv_series(panel, opts.cfv);
        }
        const auto cfv = proxies::aggregate_firms(cfv_map, opts.firm_weights, "CFv");
        const auto dd = proxies::aggregate_firms(dd_map, opts.firm_weights, "DD");
        const auto z = proxies::aggregate_firms(z_map, opts.firm_weights, "Z");

        ingest::MacroTable ratings_table;
        ratings_table.series_name = "ratings";
        ratings_table.native_frequency = ingest::Frequency::annual;
        for (const auto& [year, pct] : ratings.observations)
            ratings_table.observations.emplace_back(YearMonth{year, 12}, pct);
        const auto ir = prep::cubic_spline_to_monthly(ratings_table);

        int start = std::max({cfv.observations.front().first.index(),
                              dd.observations.front().first.index(),
                              z.observations.front().first.index(), ir.start.index()});
        int end = std::min({cfv.observations.back().first.index(),
                            dd.observations.back().first.index(),
                            z.observations.back().first.index(), ir.last().index()});
        if (start > end) throw ValidationError("proxies: no common month coverage");

        auto value_at = [](const proxies::ProxySeries& s, int idx) {
            return s.observations[idx - s.observations.front().first.index()].second;
        };
        std::vector<std::vector<std::string>> rows;
        for (int m = start; m <= end; ++m)
            rows.push_back({YearMonth::from_index(m).str(), csv::format_double(value_at(cfv, m)),
                            csv::format_double(value_at(dd, m)), csv::format_double(value_at(z, m)),
                            csv::format_double(ir.values[m - ir.start.index()])});
        csv::write_file(proxies_out, {"date", "CFv", "DD", "Z", "IR"}, rows);
        std::cout << "wrote " << rows.size() << " months to " << proxies_out << "\n";
    });

    // ---- prep -------------------------------------------------------------------
    auto* prep_cmd = app.add_subcommand("prep", "build the aligned monthly dataset");
    CommonInputs prep_in;
    add_input_options(prep_cmd, prep_in, true);
    std::string prep_out = "aligned.csv";
    bool prep_no_lag = false;
    bool prep_robust = false;
    prep_cmd->add_option("--out", prep_out, "output csv with metadata comments");
    prep_cmd->add_flag("--no-lag", prep_no_lag, "omit the lagged-spread column");
    prep_cmd->add_flag("--robustness-controls", prep_robust, "use dPPI and dlnGDP instead");
    prep_cmd->callback([&] {
        auto cfg = config_from_inputs(prep_in);
        if (prep_robust) cfg.stages.controls = pipeline::robustness_controls();
        auto panels = ingest::load_firm_panel(cfg.firms_path);
        ingest::attach_prices(panels, cfg.prices_path);
        const auto zr = ingest::load_z_ratios(cfg.zratios_path);
        const auto ratings = ingest::load_ratings(cfg.ratings_path);
        const auto spreads =
            ingest::load_macro_table(cfg.spreads_path, ingest::Frequency::monthly, "spreads");
        std::map<std::string, ingest::MacroTable> macros;
        for (const auto& [key, path] : cfg.macro_paths)
            macros[key] = ingest::load_macro_table(
                path, key == "gdp" ? ingest::Frequency::quarterly : ingest::Frequency::monthly,
                key);
        if (!cfg.weights_path.empty())
            cfg.stages.firm_weights = ingest::load_weights(cfg.weights_path);
        const auto data = pipeline::assemble(panels, zr, ratings, macros, spreads, cfg.stages);
        prep::write_aligned_csv(prep_no_lag ? data.eq4 : data.eq2, prep_out);
        std::cout << "wrote aligned dataset (" << (prep_no_lag ? data.eq4 : data.eq2).rows()
                  << " months) to " << prep_out << "\n";
    });

    // ---- regress ------------------------------------------------------------------
    auto* regress_cmd =
        app.add_subcommand("regress", "single-proxy and full spread fits on an aligned dataset");
    std::string regress_aligned, regress_out = "fits.json";
    int regress_bg_lags = 12;
    regress_cmd->add_option("--aligned", regress_aligned, "aligned csv from 'prep'")->required();
    regress_cmd->add_option("--out", regress_out, "output json");
    regress_cmd->add_option("--bg-lags", regress_bg_lags, "Breusch-Godfrey lag order");
    regress_cmd->callback([&] {
        const auto data = prep::read_aligned_csv(regress_aligned);
        const auto fit_json = [](const ols::RegressionFit& fit) {
            nlohmann::json fj;
            for (size_t i = 0; i < fit.names.size(); ++i) {
                const auto idx = static_cast<Eigen::Index>(i);
                fj["coefficients"][fit.names[i]] = {
                    {"coef", fit.coef(idx)},
                    {"stderr", fit.stderrs(idx)},
                    {"t_stat", fit.t_stat(idx)},
                    {"p_value", fit.p_value(idx)},
                    {"star", ols::significance_stars(fit.p_value(idx))}};
            }
            fj["adj_r2"] = fit.adj_r2;
            fj["aic"] = fit.aic;
            fj["durbin_watson"] = fit.durbin_watson;
            fj["n_obs"] = fit.n_obs;
            return fj;
        };
        nlohmann::json j;
        std::vector<std::string> controls;
        for (const auto& c : data.controls) controls.push_back(c.name);
        for (const auto& proxy : data.proxies) {
            std::vector<std::string> cols{proxy.name};
            cols.insert(cols.end(), controls.begin(), controls.end());
            j["single"][proxy.name] = fit_json(ols::fit_columns(data, cols));
        }
        const auto full = ols::fit_spread_model(data);
        j["full"] = fit_json(full);
        std::vector<std::string> all_names;
        for (const auto& c : data.proxies) all_names.push_back(c.name);
        all_names.insert(all_names.end(), controls.begin(), controls.end());
        const auto X = pipeline::design_matrix(data, all_names);
        const auto bg = diag::breusch_godfrey(full, X, regress_bg_lags);
        j["full_bg"] = {{"statistic", bg.statistic}, {"df", bg.df1}, {"p_value", bg.p_value}};
        std::ofstream out(regress_out);
        if (!out) throw IoError("cannot write '" + regress_out + "'");
        out << j.dump(2) << "\n";
        std::cout << "wrote fits to " << regress_out << "\n";
    });

    // ---- index ---------------------------------------------------------------------
    auto* index_cmd =
        app.add_subcommand("index", "proxy selection and post-hoc index construction");
    std::string index_aligned, index_aligned_nolag, index_out_dir = ".";
    double index_alpha = 0.10;
    std::string index_delta = "diff";
    index_cmd->add_option("--aligned", index_aligned, "lagged aligned csv (full model window)")
        ->required();
    index_cmd->add_option("--aligned-nolag", index_aligned_nolag,
                          "unlagged aligned csv; the index is evaluated on this window");
    index_cmd->add_option("--alpha", index_alpha, "significance threshold for proxy selection");
    index_cmd->add_option("--delta", index_delta, "delta_rho mode: diff or pct");
    index_cmd->add_option("--out-dir", index_out_dir, "where index.csv and weights.json go");
    index_cmd->callback([&] {
        pipeline::AssembledData data;
        data.eq2 = prep::read_aligned_csv(index_aligned);
        data.eq4 = index_aligned_nolag.empty() ? data.eq2 : prep::read_aligned_csv(index_aligned_nolag);
        pipeline::StageOptions opts;
        opts.alpha = index_alpha;
        opts.delta_mode = index_delta == "pct" ? posthoc::DeltaMode::pct_change
                                               : posthoc::DeltaMode::first_difference;
        const auto eq2_fit = ols::fit_spread_model(data.eq2);
        const auto stage = pipeline::build_posthoc(data, eq2_fit, opts);

        fs::create_directories(index_out_dir);
        std::vector<std::vector<std::string>> rows;
        for (size_t t = 0; t < stage.index.series.size(); ++t)
            rows.push_back({stage.index.dates[t].str(), csv::format_double(stage.index.series[t]),
                            t == 0 ? "" : csv::format_double(stage.index.delta_series[t - 1])});
        csv::write_file((fs::path(index_out_dir) / "index.csv").string(),
                        {"date", "rho", "delta_rho"}, rows);
        nlohmann::json weights;
        weights["principal"] = stage.index.principal;
        for (const auto& m : stage.index.members)
            weights["members"][m.name] = {
                {"beta", m.beta}, {"cov_ratio", m.cov_ratio}, {"weight", m.weight}};
        std::ofstream wout(fs::path(index_out_dir) / "weights.json");
        if (!wout) throw IoError("cannot write weights.json");
        wout << weights.dump(2) << "\n";
        std::cout << "principal proxy: " << stage.index.principal << "; index over "
                  << stage.index.series.size() << " months\n";
    });

    // ---- regimes ---------------------------------------------------------------------
    auto* regimes_cmd = app.add_subcommand("regimes", "crisis/non-crisis split regression");
    std::string regimes_aligned, regimes_index, regimes_out = "regimes.json";
    std::vector<std::string> regime_specs{"subprime"};
    regimes_cmd->add_option("--aligned", regimes_aligned, "aligned csv matching the index window")
        ->required();
    regimes_cmd->add_option("--index", regimes_index, "index.csv from 'index'")->required();
    regimes_cmd->add_option("--window", regime_specs,
                            "window preset (subprime, dotcom) or label:YYYY-MM..YYYY-MM");
    regimes_cmd->add_option("--out", regimes_out, "output json");
    regimes_cmd->callback([&] {
        const auto data = prep::read_aligned_csv(regimes_aligned);
        const auto index_table = csv::read_file(regimes_index);
        std::vector<double> rho;
        std::vector<YearMonth> rho_dates;
        const int rho_col = index_table.column("rho");
        if (rho_col < 0) throw ValidationError("regimes: index csv lacks a 'rho' column");
        for (const auto& row : index_table.rows) {
            rho_dates.push_back(parse_year_month(row.fields[0]));
            rho.push_back(csv::parse_double(index_table, row, rho_col));
        }
        if (rho_dates != data.dates)
            throw ValidationError("regimes: index months do not match the aligned dataset");

        nlohmann::json j;
        for (const auto& spec : regime_specs) {
            regimes::RegimeWindow window;
            if (spec == "subprime") {
                window = regimes::subprime_window();
            } else if (spec == "dotcom") {
                window = regimes::dotcom_window();
            } else {
                const auto colon = spec.find(':');
                const auto dots = spec.find("..");
                if (colon == std::string::npos || dots == std::string::npos)
                    throw ValidationError("regimes: bad window spec '" + spec + "'");
                window.label = spec.substr(0, colon);
                window.start = parse_year_month(spec.substr(colon + 1, dots - colon - 1));
                window.end = parse_year_month(spec.substr(dots + 2));
            }
            const auto mask = regimes::crisis_mask(data.dates, window);
            const auto fit = regimes::regime_regression(data.y.values, rho, mask);
            nlohmann::json entry;
            entry["collapsed"] = fit.collapsed;
            entry["n_crisis"] = fit.n_crisis;
            entry["n_non_crisis"] = fit.n_non_crisis;
            for (size_t i = 0; i < fit.fit.names.size(); ++i)
                entry["coefficients"][fit.fit.names[i]] = {
                    {"coef", fit.fit.coef(static_cast<Eigen::Index>(i))},
                    {"stderr", fit.fit.stderrs(static_cast<Eigen::Index>(i))},
                    {"p_value", fit.fit.p_value(static_cast<Eigen::Index>(i))},
                    {"star", ols::significance_stars(fit.fit.p_value(static_cast<Eigen::Index>(i)))}};
            entry["adj_r2"] = fit.fit.adj_r2;
            entry["durbin_watson"] = fit.fit.durbin_watson;
            entry["n_obs"] = fit.fit.n_obs;
            j[window.label] = entry;
        }
        std::ofstream out(regimes_out);
        if (!out) throw IoError("cannot write '" + regimes_out + "'");
        out << j.dump(2) << "\n";
        std::cout << "wrote regime fits to " << regimes_out << "\n";
    });

    // ---- pipeline ---------------------------------------------------------------------
    auto* pipeline_cmd = app.add_subcommand("pipeline", "run every stage from a config file");
    std::string pipeline_config_path;
    std::string pipeline_out_override;
    pipeline_cmd->add_option("--config", pipeline_config_path, "pipeline config file")->required();
    pipeline_cmd->add_option("--out", pipeline_out_override, "override the output directory");
    pipeline_cmd->callback([&] {
        const auto kv = config::parse_file(pipeline_config_path);
        auto cfg = config::load_pipeline_config(
            kv, fs::path(pipeline_config_path).parent_path().string());
        if (!pipeline_out_override.empty()) cfg.output_dir = pipeline_out_override;
        auto run = pipeline::run_pipeline(cfg);
        run.config_echo = config::render_effective(cfg);
        report::write_all(run, cfg.output_dir);
        std::cout << "pipeline complete; report in " << cfg.output_dir << "\n";
    });

    // ---- report -----------------------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "re-render a saved report.json");
    std::string report_json_path, report_format = "text", report_out = ".";
    report_cmd->add_option("--json", report_json_path, "report.json path")->required();
    report_cmd->add_option("--format", report_format, "text | csv | json");
    report_cmd->add_option("--out", report_out, "output directory");
    report_cmd->callback([&] {
        std::ifstream in(report_json_path);
        if (!in) throw IoError("cannot open '" + report_json_path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        const auto run = report::parse_json(buf.str());
        fs::create_directories(report_out);
        if (report_format == "text") {
            std::ofstream out(fs::path(report_out) / "report.txt");
            out << report::render_text(run);
        } else if (report_format == "csv") {
            report::write_csv_tables(run, report_out);
        } else if (report_format == "json") {
            std::ofstream out(fs::path(report_out) / "report.json", std::ios::binary);
            out << report::render_json(run);
        } else {
            throw ValidationError("report: unknown format '" + report_format + "'");
        }
        std::cout << "rendered " << report_format << " into " << report_out << "\n";
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
