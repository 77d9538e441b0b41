#include <doctest.h>

#include <filesystem>

#include "drix/config.hpp"
#include "drix/errors.hpp"
#include "drix/pipeline.hpp"
#include "drix/report.hpp"
#include "drix/synth.hpp"
#include "testutil.hpp"

using namespace drix;

namespace {

synth::SynthConfig small_config(std::uint64_t seed = 42) {
    synth::SynthConfig c;
    c.seed = seed;
    c.n_firms = 12;
    c.first_month = {2000, 1};
    c.last_month = {2004, 12};
    return c;
}

std::string fixture_with_config(const std::string& scratch_name, std::uint64_t seed) {
    const auto dir = testutil::scratch_dir(scratch_name);
    synth::write_fixture(synth::generate(small_config(seed)), dir);
    testutil::write_file(dir, "pipeline.ini",
                         "[inputs]\n"
                         "firms = firms.csv\n"
                         "prices = prices.csv\n"
                         "zratios = zratios.csv\n"
                         "ratings = ratings.csv\n"
                         "spreads = spreads.csv\n"
                         "macro.cpi = macro_cpi.csv\n"
                         "macro.ipi = macro_ipi.csv\n"
                         "macro.ffr = macro_ffr.csv\n"
                         "macro.ppi = macro_ppi.csv\n"
                         "macro.gdp = macro_gdp.csv\n"
                         "[output]\n"
                         "dir = out\n"
                         "[regimes]\n"
                         "windows = crisis:2002-01..2003-06\n");
    return dir;
}

}  // namespace

TEST_CASE("config: parsing, defaults, and typo rejection") {
    const auto kv = config::parse_text(
        "[model]\nalpha = 0.05\n# comment\nbg_lags = 6\n[regimes]\nwindows = subprime,dotcom\n");
    const auto cfg = config::load_pipeline_config(kv, "");
    CHECK(cfg.stages.alpha == doctest::Approx(0.05));
    CHECK(cfg.stages.bg_lags == 6);
    CHECK(cfg.stages.reset_powers == std::vector<int>{2, 3});  // default
    REQUIRE(cfg.stages.regime_windows.size() == 2);
    CHECK(cfg.stages.regime_windows[0].label == "subprime");
    CHECK(cfg.stages.regime_windows[0].start == YearMonth{2007, 7});
    CHECK(cfg.stages.regime_windows[1].label == "dotcom");

    CHECK_THROWS_WITH_AS(
        config::load_pipeline_config(config::parse_text("[model]\nalhpa = 0.05\n"), ""),
        doctest::Contains("alhpa"), ValidationError);
    CHECK_THROWS_AS(config::parse_text("[model\nalpha = 1\n"), ValidationError);
    CHECK_THROWS_AS(config::parse_text("[model]\nalpha = 1\nalpha = 2\n"), ValidationError);
}

TEST_CASE("pipeline: full run over a generated fixture directory") {
    const auto dir = fixture_with_config("pipeline_run", 21);
    const auto kv = config::parse_file(dir + "/pipeline.ini");
    auto cfg = config::load_pipeline_config(kv, dir);
    const auto report = pipeline::run_pipeline(cfg);

    CHECK(report.single_proxy_fits.size() == 4);
    CHECK(report.full_fit.names.size() == 9);  // const + 4 proxies + 4 controls
    REQUIRE(report.robustness_fit.has_value());
    CHECK(report.robustness_fit->index_of("dPPI") >= 0);
    CHECK(report.robustness_fit->index_of("dlnGDP") >= 0);
    CHECK(report.robustness_fit->index_of("dCPI") < 0);
    CHECK(report.full_bg.df1 == 12);
    CHECK_FALSE(report.selection.significant.empty());
    CHECK(report.index.series.size() == report.eq4_fit.n_obs);
    REQUIRE(report.regime_results.size() == 1);
    CHECK(report.regime_results[0].fit.n_crisis == 18);
    CHECK(report.unit_roots.size() == 9);

    SUBCASE("stage errors are tagged") {
        auto broken = cfg;
        broken.ratings_path = dir + "/no_such_file.csv";
        CHECK_THROWS_WITH_AS(pipeline::run_pipeline(broken), doctest::Contains("stage 'ingest'"),
                             IoError);
    }
}

TEST_CASE("report: deterministic JSON, lossless round-trip, stable text") {
    const auto dir = fixture_with_config("pipeline_report", 33);
    const auto kv = config::parse_file(dir + "/pipeline.ini");
    auto cfg = config::load_pipeline_config(kv, dir);
    cfg.run_unit_roots = false;  // keep the test quick

    auto run = pipeline::run_pipeline(cfg);
    run.config_echo = config::render_effective(cfg);
    auto run_again = pipeline::run_pipeline(cfg);
    run_again.config_echo = config::render_effective(cfg);

    const auto json_a = report::render_json(run);
    const auto json_b = report::render_json(run_again);
    CHECK(json_a == json_b);  // byte-identical across runs

    const auto parsed = report::parse_json(json_a);
    CHECK(report::render_json(parsed) == json_a);  // lossless round-trip

    const auto text = report::render_text(run);
    CHECK(text.find("Table 1") != std::string::npos);
    CHECK(text.find("Table 2") != std::string::npos);
    CHECK(text.find("Principal proxy") != std::string::npos);

    report::write_csv_tables(run, dir + "/csv");
    CHECK(std::filesystem::exists(dir + "/csv/table1.csv"));
    CHECK(std::filesystem::exists(dir + "/csv/table2.csv"));
    CHECK(std::filesystem::exists(dir + "/csv/index.csv"));
    CHECK(std::filesystem::exists(dir + "/csv/weights.json"));
    CHECK(std::filesystem::exists(dir + "/csv/variance_decomposition.csv"));
}

TEST_CASE("report: cell formatting follows the stderr-in-brackets convention") {
    CHECK(report::format_cell(-0.15, 0.03, 0.004) == "-0.15 a (0.03)");
    CHECK(report::format_cell(1.51, 0.92, 0.09) == "1.51 c (0.92)");
    CHECK(report::format_cell(-0.07, 0.05, 0.4) == "-0.07 (0.05)");
}

TEST_CASE("report: empty regime list renders with an explicit note") {
    const auto dir = fixture_with_config("pipeline_noregime", 44);
    const auto kv = config::parse_file(dir + "/pipeline.ini");
    auto cfg = config::load_pipeline_config(kv, dir);
    cfg.run_unit_roots = false;
    cfg.stages.regime_windows.clear();
    auto run = pipeline::run_pipeline(cfg);
    CHECK(run.regime_results.empty());
    const auto text = report::render_text(run);
    CHECK(text.find("no regime windows configured") != std::string::npos);
}
