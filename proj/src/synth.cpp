#include "drix/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "drix/csv.hpp"
#include "drix/errors.hpp"
#include "drix/pipeline.hpp"
#include "drix/prep.hpp"
#include "drix/proxies.hpp"
#include "drix/rng.hpp"
#include "drix/stats.hpp"

namespace drix::synth {

namespace {

// Substream tags; one stream per independent component.
enum Tag : std::uint64_t {
    kLatent = 1,
    kDdNoise = 2,
    kZNoise = 3,
    kCfvCommon = 4,
    kRatings = 5,
    kCpi = 6,
    kIpi = 7,
    kFfr = 8,
    kPpi = 9,
    kGdp = 10,
    kYs = 11,
    kFirmBase = 1000
};

void validate(const SynthConfig& c) {
    if (!(std::fabs(c.ar1_phi) < 1.0))
        throw ValidationError("synth: |ar1_phi| must be below 1");
    if (!(c.shock_sd > 0.0) || !(c.noise_sd >= 0.0) || c.dd.noise_sd < 0.0 || c.z.noise_sd < 0.0)
        throw ValidationError("synth: standard deviations must be non-negative (shock_sd positive)");
    if (c.n_firms < 2) throw ValidationError("synth: need at least 2 firms");
    if (c.trading_days < 3) throw ValidationError("synth: need at least 3 trading days per month");
    if (c.cfv_window_months < 2) throw ValidationError("synth: cfv window must be >= 2 months");
    const int T = months_between_inclusive(c.first_month, c.last_month);
    if (T < 48) throw ValidationError("synth: sample must span at least 48 months");
    if (!(c.crisis.amplification > 0.0))
        throw ValidationError("synth: crisis amplification must be positive");
}

struct MonthGrid {
    int w0, w1;          // focused (change) window, month indices
    int firm_start;      // firm panels start here so the CFv window is full at w0
    int level_start;     // macro/spread levels start one month before w0
    int f_start;         // latent factor coverage (also spans the first ratings year)
};

MonthGrid grid_for(const SynthConfig& c) {
    MonthGrid g;
    g.w0 = c.first_month.index();
    g.w1 = c.last_month.index();
    g.firm_start = g.w0 - (c.cfv_window_months - 1);
    g.level_start = g.w0 - 1;
    g.f_start = std::min(g.firm_start, YearMonth{c.first_month.year - 1, 1}.index());
    return g;
}

std::vector<std::pair<std::string, double>> coefficient_record(const SynthConfig& c) {
    return {{"const", c.theta},   {"CFv", c.alpha_cfv},  {"dDD", c.alpha_dd},
            {"dZ", c.alpha_z},    {"dIR", c.alpha_ir},   {"dCPI", c.gamma_cpi},
            {"dIPI", c.gamma_ipi}, {"dFFR", c.gamma_ffr}, {"dYS_lag1", c.gamma_lag}};
}

}  // namespace

SynthOutput generate(const SynthConfig& c) {
    validate(c);
    const MonthGrid g = grid_for(c);
    const auto amp = [&](int m) {
        return (c.crisis.start.index() <= m && m <= c.crisis.end.index())
                   ? c.crisis.amplification
                   : 1.0;
    };

    // Latent AR(1) factor, stationary start.
    std::vector<double> f(g.w1 - g.f_start + 1);
    {
        auto rng = SplitMix64::substream(c.seed, kLatent);
        const double stat_sd = c.shock_sd / std::sqrt(1.0 - c.ar1_phi * c.ar1_phi);
        f[0] = stat_sd * rng.next_normal();
        for (size_t t = 1; t < f.size(); ++t)
            f[t] = c.ar1_phi * f[t - 1] + c.shock_sd * rng.next_normal();
    }
    const auto f_at = [&](int m) { return f[m - g.f_start]; };

    // Reverse-engineered level paths whose percentage changes are the latent
    // driven proxy targets. The Z channel loads on the lagged factor so the
    // two stay identified even with both noise terms at zero.
    const int n_level_months = g.w1 - g.firm_start + 1;
    std::vector<double> dd_level(n_level_months), z_level(n_level_months);
    {
        auto dd_rng = SplitMix64::substream(c.seed, kDdNoise);
        auto z_rng = SplitMix64::substream(c.seed, kZNoise);
        dd_level[0] = c.dd_level_base;
        z_level[0] = c.z_level_base;
        for (int t = 1; t < n_level_months; ++t) {
            const int m = g.firm_start + t;
            const double d_dd = c.dd.loading * amp(m) * f_at(m) + c.dd.noise_sd * dd_rng.next_normal();
            const double d_z =
                c.z.loading * amp(m) * f_at(m - 1) + c.z.noise_sd * z_rng.next_normal();
            if (d_dd <= -100.0 || d_z <= -100.0)
                throw ValidationError(
                    "synth: proxy percentage change fell below -100%, level path infeasible; "
                    "reduce loadings or noise");
            dd_level[t] = dd_level[t - 1] * (1.0 + d_dd / 100.0);
            z_level[t] = z_level[t - 1] * (1.0 + d_z / 100.0);
        }
    }

    // Common cash-flow dispersion scale (log-linear in the factor, so it
    // stays positive without clamping).
    std::vector<double> cfv_scale(n_level_months);
    {
        auto rng = SplitMix64::substream(c.seed, kCfvCommon);
        for (int t = 0; t < n_level_months; ++t) {
            const int m = g.firm_start + t;
            cfv_scale[t] = c.cfv_base * std::exp(c.cfv_loading * amp(m) * f_at(m) +
                                                 c.cfv_common_noise_sd * rng.next_normal());
        }
    }

    // Annual downgrade percentages, anchored to the year-mean factor.
    ingest::RatingsSeries ratings;
    {
        auto rng = SplitMix64::substream(c.seed, kRatings);
        for (int year = c.first_month.year - 1; year <= c.last_month.year; ++year) {
            double fsum = 0.0;
            for (int month = 1; month <= 12; ++month) fsum += f_at(YearMonth{year, month}.index());
            const double value =
                c.ir_base_pct * std::exp(c.ir_loading * fsum / 12.0 + c.ir_noise_sd * rng.next_normal());
            if (!(value > 0.0) || value > 100.0) {
                std::ostringstream msg;
                msg << "synth: downgrade percentage " << value << " for " << year
                    << " outside (0,100], infeasible config";
                throw ValidationError(msg.str());
            }
            ratings.observations.emplace_back(year, value);
        }
    }

    // Macro level paths (monthly random walks / AR in logs).
    const int n_macro = g.w1 - g.level_start + 1;
    std::vector<double> cpi(n_macro), ipi(n_macro), ffr(n_macro), ppi(n_macro);
    {
        auto cpi_rng = SplitMix64::substream(c.seed, kCpi);
        auto ipi_rng = SplitMix64::substream(c.seed, kIpi);
        auto ffr_rng = SplitMix64::substream(c.seed, kFfr);
        auto ppi_rng = SplitMix64::substream(c.seed, kPpi);
        double ln_cpi = std::log(100.0), ln_ipi = std::log(100.0);
        double ln_ffr = std::log(3.0), ln_ppi = std::log(100.0);
        for (int t = 0; t < n_macro; ++t) {
            if (t > 0) {
                const double cpi_step = 0.0017 + 0.002 * cpi_rng.next_normal();
                ln_cpi += cpi_step;
                ln_ipi += 0.0015 + 0.006 * ipi_rng.next_normal();
                ln_ffr = std::log(3.0) + 0.95 * (ln_ffr - std::log(3.0)) + 0.03 * ffr_rng.next_normal();
                ln_ppi += 0.9 * cpi_step + 0.002 * ppi_rng.next_normal();
            }
            cpi[t] = std::exp(ln_cpi);
            ipi[t] = std::exp(ln_ipi);
            ffr[t] = std::exp(ln_ffr);
            ppi[t] = std::exp(ln_ppi);
        }
    }

    // Quarterly GDP: knots must bracket the level window.
    ingest::MacroTable gdp;
    gdp.series_name = "gdp";
    gdp.native_frequency = ingest::Frequency::quarterly;
    {
        auto rng = SplitMix64::substream(c.seed, kGdp);
        int first_qe = g.level_start;
        while (YearMonth::from_index(first_qe).month % 3 != 0) --first_qe;
        int last_qe = g.w1;
        while (YearMonth::from_index(last_qe).month % 3 != 0) ++last_qe;
        double ln_gdp = std::log(15000.0);
        for (int m = first_qe; m <= last_qe; m += 3) {
            if (m != first_qe) ln_gdp += 0.005 + 0.004 * rng.next_normal();
            gdp.observations.emplace_back(YearMonth::from_index(m), std::exp(ln_gdp));
        }
    }

    // Firm-level dressing. Per-firm draws are consumed in a fixed order
    // (fixed count per month) so generation is replay-exact.
    const int n_firm_months = n_level_months;
    std::vector<std::vector<double>> dev_dd(c.n_firms), dev_z(c.n_firms), ocf(c.n_firms),
        vols(c.n_firms), assets(c.n_firms);
    std::vector<std::vector<std::vector<double>>> closes(c.n_firms);
    for (int i = 0; i < c.n_firms; ++i) {
        auto rng = SplitMix64::substream(c.seed, kFirmBase + static_cast<std::uint64_t>(i));
        double ln_assets = std::log(1000.0) + 0.5 * rng.next_normal();
        double price = std::exp(std::log(40.0) + 0.3 * rng.next_normal());
        const double ocf_base = std::exp(std::log(50.0) + 0.4 * rng.next_normal());

        dev_dd[i].resize(n_firm_months);
        dev_z[i].resize(n_firm_months);
        ocf[i].resize(n_firm_months);
        vols[i].resize(n_firm_months);
        assets[i].resize(n_firm_months);
        closes[i].resize(n_firm_months);

        for (int t = 0; t < n_firm_months; ++t) {
            auto& month_closes = closes[i][t];
            month_closes.resize(c.trading_days);
            month_closes[0] = price;
            std::vector<double> returns(c.trading_days - 1);
            for (int d = 1; d < c.trading_days; ++d) {
                returns[d - 1] = c.daily_return_sd * rng.next_normal();
                month_closes[d] = month_closes[d - 1] * std::exp(returns[d - 1]);
            }
            price = month_closes.back();
            vols[i][t] = stats::sample_sd(returns);

            ln_assets += 0.002 + 0.01 * rng.next_normal();
            assets[i][t] = std::exp(ln_assets);
            dev_dd[i][t] = c.firm_dispersion * rng.next_normal();
            dev_z[i][t] = 0.2 * c.firm_dispersion * rng.next_normal();
            ocf[i][t] = ocf_base * (1.0 + cfv_scale[t] * rng.next_normal());
        }
    }

    // Cross-sectional centering pins the equal-weight aggregates exactly on
    // the target level paths.
    for (int t = 0; t < n_firm_months; ++t) {
        double mean_dd = 0.0, mean_z = 0.0;
        for (int i = 0; i < c.n_firms; ++i) {
            mean_dd += dev_dd[i][t];
            mean_z += dev_z[i][t];
        }
        mean_dd /= c.n_firms;
        mean_z /= c.n_firms;
        for (int i = 0; i < c.n_firms; ++i) {
            dev_dd[i][t] -= mean_dd;
            dev_z[i][t] -= mean_z;
        }
    }

    SynthOutput out;
    out.firms.reserve(c.n_firms);
    for (int i = 0; i < c.n_firms; ++i) {
        char id[16];
        std::snprintf(id, sizeof(id), "F%04d", i + 1);
        ingest::FirmPanel panel;
        panel.firm_id = id;
        panel.records.reserve(n_firm_months);
        auto& zrows = out.z_ratios[panel.firm_id];
        zrows.reserve(n_firm_months);
        for (int t = 0; t < n_firm_months; ++t) {
            const YearMonth ym = YearMonth::from_index(g.firm_start + t);
            ingest::FirmMonthRecord rec;
            rec.date = ym;
            rec.total_assets = assets[i][t];
            const double firm_dd = dd_level[t] + dev_dd[i][t];
            rec.total_liabilities = assets[i][t] * std::exp(-firm_dd * vols[i][t]);
            rec.operating_cash_flow = ocf[i][t];
            rec.daily_prices.reserve(c.trading_days);
            for (int d = 0; d < c.trading_days; ++d) {
                const int day = 1 + (c.trading_days == 1 ? 0 : d * 27 / (c.trading_days - 1));
                rec.daily_prices.emplace_back(YearMonthDay{ym.year, ym.month, day}, closes[i][t][d]);
            }
            panel.records.push_back(std::move(rec));

            const double firm_z = z_level[t] + dev_z[i][t];
            ingest::ZInputs zi;
            zi.x1 = 0.1;
            zi.x2 = 0.1;
            zi.x4 = 0.5;
            zi.x5 = 1.0;
            zi.x3 = (firm_z - (1.2 * zi.x1 + 1.4 * zi.x2 + 0.6 * zi.x4 + 1.0 * zi.x5)) / 3.3;
            zrows.emplace_back(ym, zi);
        }
        out.firms.push_back(std::move(panel));
    }
    out.ratings = std::move(ratings);

    const auto make_monthly = [&](const char* name, const std::vector<double>& levels, int start) {
        ingest::MacroTable t;
        t.series_name = name;
        t.native_frequency = ingest::Frequency::monthly;
        for (size_t i = 0; i < levels.size(); ++i)
            t.observations.emplace_back(YearMonth::from_index(start + static_cast<int>(i)), levels[i]);
        return t;
    };
    out.macros["cpi"] = make_monthly("cpi", cpi, g.level_start);
    out.macros["ipi"] = make_monthly("ipi", ipi, g.level_start);
    out.macros["ffr"] = make_monthly("ffr", ffr, g.level_start);
    out.macros["ppi"] = make_monthly("ppi", ppi, g.level_start);
    out.macros["gdp"] = gdp;

    // ---- realized design columns over the focused window --------------------
    //
    // The spread series is generated from the columns the estimation pipeline
    // itself recomputes from the emitted data, through the same code paths,
    // so recovery is exact when the regression error is switched off.

    const int T = g.w1 - g.w0 + 1;

    const auto slice_series = [&](const prep::MonthlySeries& s, const char* what) {
        if (s.start.index() > g.w0 || s.last().index() < g.w1)
            throw ValidationError(std::string("synth: ") + what +
                                  " does not cover the focused sample");
        std::vector<double> out_col(T);
        for (int t = 0; t < T; ++t) out_col[t] = s.values[(g.w0 + t) - s.start.index()];
        return out_col;
    };

    std::vector<double> col_cfv, col_dd, col_z;
    {
        std::map<std::string, proxies::FirmProxySeries> dd_map, z_map, cfv_map;
        proxies::CfvOptions cfv_opts;
        cfv_opts.window_months = c.cfv_window_months;
        for (const auto& panel : out.firms) {
            dd_map[panel.firm_id] = proxies::firm_dd_series(panel);
            z_map[panel.firm_id] = proxies::firm_z_series(panel, out.z_ratios);
            cfv_map[panel.firm_id] = proxies::firm_cfv_series(panel, cfv_opts);
        }
        const auto cfv_agg = proxies::aggregate_firms(cfv_map, {}, "CFv");
        const auto dd_agg = proxies::aggregate_firms(dd_map, {}, "DD");
        const auto z_agg = proxies::aggregate_firms(z_map, {}, "Z");
        col_cfv = slice_series(prep::to_monthly(cfv_agg), "CFv aggregate");
        col_dd = slice_series(prep::pct_change(prep::to_monthly(dd_agg)), "DD changes");
        col_z = slice_series(prep::pct_change(prep::to_monthly(z_agg)), "Z changes");
    }

    const auto pct_of_levels = [&](const std::vector<double>& levels, const char* what) {
        prep::MonthlySeries s{YearMonth::from_index(g.level_start), levels};
        return slice_series(prep::pct_change(s), what);
    };
    const std::vector<double> col_cpi = pct_of_levels(cpi, "CPI changes");
    const std::vector<double> col_ipi = pct_of_levels(ipi, "IPI changes");
    const std::vector<double> col_ffr = pct_of_levels(ffr, "FFR changes");

    // dIR through the actual disaggregation path: spline, log, pct change.
    std::vector<double> col_ir(T);
    {
        ingest::MacroTable ratings_table;
        ratings_table.series_name = "ratings";
        ratings_table.native_frequency = ingest::Frequency::annual;
        for (const auto& [year, pct] : out.ratings.observations)
            ratings_table.observations.emplace_back(YearMonth{year, 12}, pct);
        const auto monthly = prep::cubic_spline_to_monthly(ratings_table);
        const auto transformed = prep::pct_change(prep::log_transform(monthly));
        const int tr_start = transformed.start.index();
        if (tr_start > g.w0 || transformed.last().index() < g.w1)
            throw ValidationError("synth: ratings window does not cover the focused sample");
        for (int t = 0; t < T; ++t) col_ir[t] = transformed.values[(g.w0 + t) - tr_start];
    }

    // Spread changes from the realized columns, then the level path.
    std::vector<double> dys(T);
    {
        auto rng = SplitMix64::substream(c.seed, kYs);
        double lag_value = 0.0;  // pre-sample change
        for (int t = 0; t < T; ++t) {
            dys[t] = c.theta + c.alpha_cfv * col_cfv[t] + c.alpha_dd * col_dd[t] +
                     c.alpha_z * col_z[t] + c.alpha_ir * col_ir[t] + c.gamma_cpi * col_cpi[t] +
                     c.gamma_ipi * col_ipi[t] + c.gamma_ffr * col_ffr[t] +
                     c.gamma_lag * lag_value + c.noise_sd * rng.next_normal();
            lag_value = dys[t];
        }
    }
    {
        ingest::MacroTable spreads;
        spreads.series_name = "spreads";
        spreads.native_frequency = ingest::Frequency::monthly;
        double level = c.ys_level_base;
        spreads.observations.emplace_back(YearMonth::from_index(g.level_start), level);
        for (int t = 0; t < T; ++t) {
            if (dys[t] <= -100.0)
                throw ValidationError("synth: spread change fell below -100%, level path infeasible");
            level *= 1.0 + dys[t] / 100.0;
            spreads.observations.emplace_back(YearMonth::from_index(g.w0 + t), level);
        }
        out.spreads = std::move(spreads);
    }

    out.truth.config = c;
    out.truth.eq2_coefficients = coefficient_record(c);
    return out;
}

GroundTruth ground_truth(const SynthConfig& c) {
    validate(c);
    GroundTruth truth;
    truth.config = c;
    truth.eq2_coefficients = coefficient_record(c);

    // Long-horizon implications: one fixed-seed run at ~40 years, pushed
    // through the same estimation stages. Selection verdicts are rescaled to
    // the configured sample size before thresholding.
    SynthConfig long_cfg = c;
    long_cfg.seed = 0x5eedULL;
    const int target_months = 480;
    long_cfg.first_month = YearMonth::from_index(c.last_month.index() - target_months + 1);

    const auto data = [&] {
        const auto out = generate(long_cfg);
        pipeline::PipelineConfig pc;
        pc.run_unit_roots = false;
        pc.run_robustness = false;
        pc.stages.regime_windows.clear();
        return pipeline::run_stages(out.firms, out.z_ratios, out.ratings, out.macros, out.spreads,
                                    pc);
    }();

    const int T_cfg = months_between_inclusive(c.first_month, c.last_month) - 1;
    const int T_long = data.full_fit.n_obs;
    const double scale = std::sqrt(static_cast<double>(T_cfg) / static_cast<double>(T_long));
    for (const auto& proxy : data.eq2_data.proxies) {
        const int idx = data.full_fit.index_of(proxy.name);
        const double t_scaled = data.full_fit.t_stat(idx) * scale;
        if (stats::t_p_twosided(t_scaled, T_cfg - data.full_fit.k_params) < 0.10)
            truth.expected_significant.push_back(proxy.name);
    }
    truth.expected_principal = data.selection.principal;
    truth.implied_eq4_lambda = data.eq4_fit.coef(1);
    return truth;
}

// ---- serialization --------------------------------------------------------------

namespace {

using nlohmann::json;

json config_to_json_obj(const SynthConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["n_firms"] = c.n_firms;
    j["first_month"] = c.first_month.str();
    j["last_month"] = c.last_month.str();
    j["theta"] = c.theta;
    j["alpha_cfv"] = c.alpha_cfv;
    j["alpha_dd"] = c.alpha_dd;
    j["alpha_z"] = c.alpha_z;
    j["alpha_ir"] = c.alpha_ir;
    j["gamma_cpi"] = c.gamma_cpi;
    j["gamma_ipi"] = c.gamma_ipi;
    j["gamma_ffr"] = c.gamma_ffr;
    j["gamma_lag"] = c.gamma_lag;
    j["noise_sd"] = c.noise_sd;
    j["ar1_phi"] = c.ar1_phi;
    j["shock_sd"] = c.shock_sd;
    j["dd_loading"] = c.dd.loading;
    j["dd_noise_sd"] = c.dd.noise_sd;
    j["z_loading"] = c.z.loading;
    j["z_noise_sd"] = c.z.noise_sd;
    j["cfv_base"] = c.cfv_base;
    j["cfv_loading"] = c.cfv_loading;
    j["cfv_common_noise_sd"] = c.cfv_common_noise_sd;
    j["ir_base_pct"] = c.ir_base_pct;
    j["ir_loading"] = c.ir_loading;
    j["ir_noise_sd"] = c.ir_noise_sd;
    j["crisis_start"] = c.crisis.start.str();
    j["crisis_end"] = c.crisis.end.str();
    j["crisis_amplification"] = c.crisis.amplification;
    j["firm_dispersion"] = c.firm_dispersion;
    j["daily_return_sd"] = c.daily_return_sd;
    j["trading_days"] = c.trading_days;
    j["cfv_window_months"] = c.cfv_window_months;
    j["dd_level_base"] = c.dd_level_base;
    j["z_level_base"] = c.z_level_base;
    j["ys_level_base"] = c.ys_level_base;
    return j;
}

SynthConfig config_from_json_obj(const json& j) {
    SynthConfig c;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.n_firms = j.at("n_firms").get<int>();
    c.first_month = parse_year_month(j.at("first_month").get<std::string>());
    c.last_month = parse_year_month(j.at("last_month").get<std::string>());
    c.theta = j.at("theta").get<double>();
    c.alpha_cfv = j.at("alpha_cfv").get<double>();
    c.alpha_dd = j.at("alpha_dd").get<double>();
    c.alpha_z = j.at("alpha_z").get<double>();
    c.alpha_ir = j.at("alpha_ir").get<double>();
    c.gamma_cpi = j.at("gamma_cpi").get<double>();
    c.gamma_ipi = j.at("gamma_ipi").get<double>();
    c.gamma_ffr = j.at("gamma_ffr").get<double>();
    c.gamma_lag = j.at("gamma_lag").get<double>();
    c.noise_sd = j.at("noise_sd").get<double>();
    c.ar1_phi = j.at("ar1_phi").get<double>();
    c.shock_sd = j.at("shock_sd").get<double>();
    c.dd.loading = j.at("dd_loading").get<double>();
    c.dd.noise_sd = j.at("dd_noise_sd").get<double>();
    c.z.loading = j.at("z_loading").get<double>();
    c.z.noise_sd = j.at("z_noise_sd").get<double>();
    c.cfv_base = j.at("cfv_base").get<double>();
    c.cfv_loading = j.at("cfv_loading").get<double>();
    c.cfv_common_noise_sd = j.at("cfv_common_noise_sd").get<double>();
    c.ir_base_pct = j.at("ir_base_pct").get<double>();
    c.ir_loading = j.at("ir_loading").get<double>();
    c.ir_noise_sd = j.at("ir_noise_sd").get<double>();
    c.crisis.start = parse_year_month(j.at("crisis_start").get<std::string>());
    c.crisis.end = parse_year_month(j.at("crisis_end").get<std::string>());
    c.crisis.amplification = j.at("crisis_amplification").get<double>();
    c.firm_dispersion = j.at("firm_dispersion").get<double>();
    c.daily_return_sd = j.at("daily_return_sd").get<double>();
    c.trading_days = j.at("trading_days").get<int>();
    c.cfv_window_months = j.at("cfv_window_months").get<int>();
    c.dd_level_base = j.at("dd_level_base").get<double>();
    c.z_level_base = j.at("z_level_base").get<double>();
    c.ys_level_base = j.at("ys_level_base").get<double>();
    return c;
}

}  // namespace

std::string to_json(const SynthConfig& config) { return config_to_json_obj(config).dump(2); }

std::string to_json(const GroundTruth& truth) {
    json j;
    j["config"] = config_to_json_obj(truth.config);
    json coeffs = json::object();
    json order = json::array();
    for (const auto& [name, value] : truth.eq2_coefficients) {
        coeffs[name] = value;
        order.push_back(name);
    }
    j["eq2_coefficients"] = coeffs;
    j["eq2_order"] = order;
    j["expected_significant"] = truth.expected_significant;
    j["expected_principal"] = truth.expected_principal;
    j["implied_eq4_lambda"] = truth.implied_eq4_lambda;
    return j.dump(2);
}

SynthConfig config_from_json(const std::string& text) {
    return config_from_json_obj(json::parse(text));
}

GroundTruth ground_truth_from_json(const std::string& text) {
    const json j = json::parse(text);
    GroundTruth truth;
    truth.config = config_from_json_obj(j.at("config"));
    for (const auto& name : j.at("eq2_order"))
        truth.eq2_coefficients.emplace_back(name.get<std::string>(),
                                            j.at("eq2_coefficients").at(name.get<std::string>()).get<double>());
    truth.expected_significant = j.at("expected_significant").get<std::vector<std::string>>();
    truth.expected_principal = j.at("expected_principal").get<std::string>();
    truth.implied_eq4_lambda = j.at("implied_eq4_lambda").get<double>();
    return truth;
}

void write_fixture(const SynthOutput& output, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    const auto path = [&](const char* name) { return (fs::path(directory) / name).string(); };

    ingest::write_firm_panel(output.firms, path("firms.csv"), path("prices.csv"));
    ingest::write_z_ratios(output.z_ratios, path("zratios.csv"));
    ingest::write_ratings(output.ratings, path("ratings.csv"));
    for (const auto& [key, table] : output.macros)
        ingest::write_macro_table(table, path(("macro_" + key + ".csv").c_str()));
    ingest::write_macro_table(output.spreads, path("spreads.csv"));

    std::ofstream gt(path("ground_truth.json"));
    if (!gt) throw IoError("cannot write ground_truth.json in '" + directory + "'");
    gt << to_json(ground_truth(output.truth.config)) << "\n";
}

}  // namespace drix::synth
