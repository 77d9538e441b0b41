#include <doctest.h>

#include <cmath>

#include "drix/errors.hpp"
#include "drix/ingest.hpp"
#include "drix/ols.hpp"
#include "drix/pipeline.hpp"
#include "drix/synth.hpp"
#include "testutil.hpp"

using namespace drix;

namespace {

// Small, fast configuration for the unit suite; the acceptance binary runs
// the full-size default.
synth::SynthConfig small_config(std::uint64_t seed = 42) {
    synth::SynthConfig c;
    c.seed = seed;
    c.n_firms = 12;
    c.first_month = {2000, 1};
    c.last_month = {2004, 12};
    return c;
}

}  // namespace

TEST_CASE("generate: identical seeds give identical datasets") {
    const auto a = synth::generate(small_config(7));
    const auto b = synth::generate(small_config(7));
    REQUIRE(a.firms.size() == b.firms.size());
    for (size_t i = 0; i < a.firms.size(); ++i) {
        REQUIRE(a.firms[i].records.size() == b.firms[i].records.size());
        for (size_t r = 0; r < a.firms[i].records.size(); ++r) {
            CHECK(a.firms[i].records[r].total_assets == b.firms[i].records[r].total_assets);
            CHECK(a.firms[i].records[r].total_liabilities ==
                  b.firms[i].records[r].total_liabilities);
            CHECK(a.firms[i].records[r].daily_prices == b.firms[i].records[r].daily_prices);
        }
    }
    CHECK(a.spreads.observations == b.spreads.observations);
    CHECK(a.ratings.observations == b.ratings.observations);
    CHECK(a.macros.at("cpi").observations == b.macros.at("cpi").observations);

    const auto c = synth::generate(small_config(8));
    CHECK(c.spreads.observations != a.spreads.observations);
}

TEST_CASE("generate: fixture files re-ingest to the same structures") {
    const auto out = synth::generate(small_config(3));
    const auto dir = testutil::scratch_dir("synth_roundtrip");
    synth::write_fixture(out, dir);

    const auto firms_path = dir + "/firms.csv";
    auto reloaded = ingest::load_firm_panel(firms_path);
    ingest::attach_prices(reloaded, dir + "/prices.csv");
    REQUIRE(reloaded.size() == out.firms.size());
    for (size_t i = 0; i < out.firms.size(); ++i) {
        CHECK(reloaded[i].firm_id == out.firms[i].firm_id);
        REQUIRE(reloaded[i].records.size() == out.firms[i].records.size());
        for (size_t r = 0; r < out.firms[i].records.size(); ++r) {
            const auto& x = out.firms[i].records[r];
            const auto& y = reloaded[i].records[r];
            CHECK(x.total_assets == y.total_assets);
            CHECK(x.total_liabilities == y.total_liabilities);
            CHECK(x.operating_cash_flow == y.operating_cash_flow);
            CHECK(x.daily_prices == y.daily_prices);
        }
    }
    const auto ratings = ingest::load_ratings(dir + "/ratings.csv");
    CHECK(ratings.observations == out.ratings.observations);
    const auto spreads =
        ingest::load_macro_table(dir + "/spreads.csv", ingest::Frequency::monthly, "spreads");
    CHECK(spreads.observations == out.spreads.observations);
    const auto gdp = ingest::load_macro_table(dir + "/macro_gdp.csv",
                                              ingest::Frequency::quarterly, "gdp");
    CHECK(gdp.observations == out.macros.at("gdp").observations);
    const auto zr = ingest::load_z_ratios(dir + "/zratios.csv");
    CHECK(zr == out.z_ratios);
}

TEST_CASE("generate: noiseless run recovers the true coefficients to 1e-8") {
    auto cfg = small_config(11);
    cfg.noise_sd = 0.0;
    cfg.dd.noise_sd = 0.0;
    cfg.z.noise_sd = 0.0;
    cfg.cfv_common_noise_sd = 0.0;
    cfg.ir_noise_sd = 0.0;
    const auto out = synth::generate(cfg);

    pipeline::PipelineConfig pc;
    pc.run_unit_roots = false;
    const auto report = pipeline::run_stages(out.firms, out.z_ratios, out.ratings, out.macros,
                                             out.spreads, pc);
    REQUIRE(report.full_fit.names.size() == out.truth.eq2_coefficients.size());
    for (const auto& [name, value] : out.truth.eq2_coefficients) {
        const int idx = report.full_fit.index_of(name);
        REQUIRE(idx >= 0);
        CHECK(report.full_fit.coef(idx) == doctest::Approx(value).epsilon(1e-8));
    }
    CHECK(report.full_fit.r2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("generate: focused window produces 131/132-row designs on defaults") {
    // 2000-01..2004-12 -> 60 focused months, 59 once the lag joins.
    const auto out = synth::generate(small_config(5));
    pipeline::PipelineConfig pc;
    pc.run_unit_roots = false;
    const auto report = pipeline::run_stages(out.firms, out.z_ratios, out.ratings, out.macros,
                                             out.spreads, pc);
    CHECK(report.full_fit.n_obs == 59);
    CHECK(report.eq4_fit.n_obs == 60);
    CHECK(report.eq2_data.dates.front() == YearMonth{2000, 2});
    CHECK(report.eq2_data.dates.back() == YearMonth{2004, 12});
}

TEST_CASE("ground_truth: coefficient record echoes the configured values") {
    synth::SynthConfig cfg;  // full defaults
    const auto truth = synth::ground_truth(cfg);
    const auto find = [&](const std::string& name) {
        for (const auto& [n, v] : truth.eq2_coefficients)
            if (n == name) return v;
        FAIL("missing coefficient ", name);
        return 0.0;
    };
    CHECK(find("CFv") == doctest::Approx(1.51));
    CHECK(find("dDD") == doctest::Approx(-0.15));
    CHECK(find("dZ") == doctest::Approx(-0.04));
    CHECK(find("dIR") == doctest::Approx(1.17));
    CHECK(find("dCPI") == doctest::Approx(-4.65));
    CHECK(find("dFFR") == doctest::Approx(-2.54));
    CHECK(truth.implied_eq4_lambda != 0.0);
    CHECK_FALSE(truth.expected_significant.empty());
    CHECK_FALSE(truth.expected_principal.empty());
}

TEST_CASE("ground_truth: modified config echoes the modification") {
    auto cfg = small_config(1);
    cfg.alpha_dd = -0.5;
    const auto truth = synth::ground_truth(cfg);
    bool found = false;
    for (const auto& [n, v] : truth.eq2_coefficients)
        if (n == "dDD") {
            CHECK(v == doctest::Approx(-0.5));
            found = true;
        }
    CHECK(found);
}

TEST_CASE("ground_truth: JSON round-trip is lossless") {
    auto cfg = small_config(9);
    cfg.alpha_cfv = 1.5100000000000002;  // exercise shortest-round-trip formatting
    const auto truth = synth::ground_truth(cfg);
    const auto text = synth::to_json(truth);
    const auto parsed = synth::ground_truth_from_json(text);
    CHECK(parsed.config.seed == truth.config.seed);
    CHECK(parsed.config.alpha_cfv == truth.config.alpha_cfv);  // bit-exact
    CHECK(parsed.eq2_coefficients == truth.eq2_coefficients);
    CHECK(parsed.expected_significant == truth.expected_significant);
    CHECK(parsed.expected_principal == truth.expected_principal);
    CHECK(parsed.implied_eq4_lambda == truth.implied_eq4_lambda);
    CHECK(synth::to_json(parsed) == text);
}

TEST_CASE("generate: infeasible configurations are rejected") {
    auto cfg = small_config(2);
    cfg.ir_base_pct = 99.0;
    cfg.ir_loading = 3.0;  // annual values explode past 100
    CHECK_THROWS_AS(synth::generate(cfg), ValidationError);

    auto bad_phi = small_config(2);
    bad_phi.ar1_phi = 1.0;
    CHECK_THROWS_AS(synth::generate(bad_phi), ValidationError);

    auto tiny = small_config(2);
    tiny.last_month = {2001, 12};  // under the 48-month floor
    CHECK_THROWS_AS(synth::generate(tiny), ValidationError);
}
