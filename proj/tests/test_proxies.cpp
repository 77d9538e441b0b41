#include <doctest.h>

#include <cmath>
#include <random>

#include "drix/errors.hpp"
#include "drix/proxies.hpp"

using namespace drix;

TEST_CASE("monthly_stock_volatility") {
    SUBCASE("constant prices give zero") {
        std::vector<double> p{100.0, 100.0, 100.0};
        CHECK(proxies::monthly_stock_volatility(p) == 0.0);
    }
    SUBCASE("hand-evaluated up-down path") {
        std::vector<double> p{100.0, 110.0, 100.0};
        const double want = std::log(1.1) * std::sqrt(2.0);  // ~0.13479
        CHECK(proxies::monthly_stock_volatility(p) == doctest::Approx(want).epsilon(1e-12));
        CHECK(proxies::monthly_stock_volatility(p) == doctest::Approx(0.13479).epsilon(1e-4));
    }
    SUBCASE("single price errors") {
        std::vector<double> p{100.0};
        CHECK_THROWS_AS(proxies::monthly_stock_volatility(p), NumericError);
    }
    SUBCASE("non-positive price errors") {
        std::vector<double> p{100.0, 0.0, 90.0};
        CHECK_THROWS_AS(proxies::monthly_stock_volatility(p), NumericError);
    }
    SUBCASE("scale invariance") {
        std::mt19937 gen(7);
        std::normal_distribution<double> d(0.0, 0.02);
        std::vector<double> p{50.0};
        for (int i = 0; i < 20; ++i) p.push_back(p.back() * std::exp(d(gen)));
        std::vector<double> scaled = p;
        for (auto& v : scaled) v *= 17.5;
        CHECK(proxies::monthly_stock_volatility(p) ==
              doctest::Approx(proxies::monthly_stock_volatility(scaled)).epsilon(1e-12));
    }
}

TEST_CASE("distance_to_default") {
    CHECK(proxies::distance_to_default(500.0, 500.0, 0.2) == 0.0);
    CHECK(proxies::distance_to_default(1000.0, 500.0, 0.10) ==
          doctest::Approx(std::log(2.0) / 0.10).epsilon(1e-12));
    CHECK_THROWS_AS(proxies::distance_to_default(1000.0, 500.0, 0.0), NumericError);
    CHECK_THROWS_AS(proxies::distance_to_default(-1.0, 500.0, 0.1), NumericError);

    // antisymmetric in assets/liabilities
    const double a = proxies::distance_to_default(900.0, 400.0, 0.3);
    const double b = proxies::distance_to_default(400.0, 900.0, 0.3);
    CHECK(a == doctest::Approx(-b).epsilon(1e-14));
}

TEST_CASE("altman_z") {
    CHECK(proxies::altman_z({0, 0, 0, 0, 0}) == 0.0);
    CHECK(proxies::altman_z({0.1, 0.1, 0.1, 0.5, 1.0}) == doctest::Approx(1.89).epsilon(1e-12));
    CHECK(proxies::altman_z({1, 0, 0, 0, 0}) == doctest::Approx(1.2).epsilon(1e-12));
    CHECK_THROWS_AS(proxies::altman_z({std::nan(""), 0, 0, 0, 0}), NumericError);

    SUBCASE("exact linearity") {
        const ingest::ZInputs u{0.2, -0.1, 0.05, 0.7, 1.3};
        const ingest::ZInputs v{-0.3, 0.4, 0.02, 0.1, 0.6};
        const double a = 2.5, b = -1.25;
        ingest::ZInputs mix{a * u.x1 + b * v.x1, a * u.x2 + b * v.x2, a * u.x3 + b * v.x3,
                            a * u.x4 + b * v.x4, a * u.x5 + b * v.x5};
        CHECK(proxies::altman_z(mix) ==
              doctest::Approx(a * proxies::altman_z(u) + b * proxies::altman_z(v)).epsilon(1e-12));
    }
}

TEST_CASE("cash_flow_volatility") {
    std::vector<double> constant{7.0, 7.0, 7.0};
    CHECK(proxies::cash_flow_volatility(constant) == 0.0);

    std::vector<double> ladder{5.0, 10.0, 15.0};
    CHECK(proxies::cash_flow_volatility(ladder) == doctest::Approx(0.5).epsilon(1e-12));

    std::vector<double> balanced{10.0, -10.0};
    CHECK_THROWS_AS(proxies::cash_flow_volatility(balanced), NumericError);

    SUBCASE("scale invariance") {
        std::vector<double> w{3.0, 8.0, -1.0, 12.0, 7.0};
        std::vector<double> scaled = w;
        for (auto& v : scaled) v *= -4.5;
        CHECK(proxies::cash_flow_volatility(w) ==
              doctest::Approx(proxies::cash_flow_volatility(scaled)).epsilon(1e-12));
    }
}

namespace {

proxies::FirmProxySeries series_of(std::vector<std::pair<YearMonth, std::optional<double>>> v) {
    return {std::move(v)};
}

}  // namespace

TEST_CASE("aggregate_firms") {
    const YearMonth m1{2004, 1};

    SUBCASE("equal weights give the arithmetic mean") {
        std::map<std::string, proxies::FirmProxySeries> firms;
        firms["a"] = series_of({{m1, 2.0}});
        firms["b"] = series_of({{m1, 4.0}});
        const auto agg = proxies::aggregate_firms(firms, {}, "DD");
        REQUIRE(agg.observations.size() == 1);
        CHECK(agg.observations[0].second == doctest::Approx(3.0));
    }
    SUBCASE("weights 1 and 3 give 3.5") {
        std::map<std::string, proxies::FirmProxySeries> firms;
        firms["a"] = series_of({{m1, 2.0}});
        firms["b"] = series_of({{m1, 4.0}});
        const auto agg = proxies::aggregate_firms(firms, {{"a", 1.0}, {"b", 3.0}}, "DD");
        CHECK(agg.observations[0].second == doctest::Approx(3.5).epsilon(1e-12));
    }
    SUBCASE("undefined value renormalizes onto the other firm") {
        std::map<std::string, proxies::FirmProxySeries> firms;
        firms["a"] = series_of({{m1, std::nullopt}});
        firms["b"] = series_of({{m1, 4.0}});
        const auto agg = proxies::aggregate_firms(firms, {}, "DD");
        CHECK(agg.observations[0].second == doctest::Approx(4.0));
    }
    SUBCASE("a month with no defined firm errors naming the month") {
        const YearMonth m2{2004, 2};
        std::map<std::string, proxies::FirmProxySeries> firms;
        firms["a"] = series_of({{m1, 1.0}, {m2, std::nullopt}, {{2004, 3}, 2.0}});
        CHECK_THROWS_WITH_AS(proxies::aggregate_firms(firms, {}, "DD"),
                             doctest::Contains("2004-02"), ValidationError);
    }
    SUBCASE("zero weight sum errors") {
        std::map<std::string, proxies::FirmProxySeries> firms;
        firms["a"] = series_of({{m1, 1.0}});
        CHECK_THROWS_AS(proxies::aggregate_firms(firms, {{"a", 0.0}}, "DD"), ValidationError);
    }
    SUBCASE("aggregate stays inside the defined min/max each month") {
        std::mt19937 gen(11);
        std::uniform_real_distribution<double> val(-5.0, 5.0);
        std::uniform_real_distribution<double> wgt(0.1, 3.0);
        std::map<std::string, proxies::FirmProxySeries> firms;
        std::map<std::string, double> weights;
        for (int i = 0; i < 6; ++i) {
            std::vector<std::pair<YearMonth, std::optional<double>>> rows;
            for (int m = 0; m < 12; ++m) {
                if (i == m % 6)
                    rows.emplace_back(YearMonth::from_index(m1.index() + m), std::nullopt);
                else
                    rows.emplace_back(YearMonth::from_index(m1.index() + m), val(gen));
            }
            const std::string id = "f" + std::to_string(i);
            firms[id] = series_of(std::move(rows));
            weights[id] = wgt(gen);
        }
        const auto agg = proxies::aggregate_firms(firms, weights, "Z");
        for (size_t t = 0; t < agg.observations.size(); ++t) {
            double lo = 1e300, hi = -1e300;
            for (const auto& [id, s] : firms) {
                const auto& v = s.values[t].second;
                if (v) {
                    lo = std::min(lo, *v);
                    hi = std::max(hi, *v);
                }
            }
            CHECK(agg.observations[t].second >= lo - 1e-12);
            CHECK(agg.observations[t].second <= hi + 1e-12);
        }
    }
}

TEST_CASE("firm series builders flag undefined months instead of erroring") {
    ingest::FirmPanel panel;
    panel.firm_id = "A";
    for (int m = 0; m < 3; ++m) {
        ingest::FirmMonthRecord rec;
        rec.date = YearMonth::from_index(YearMonth{2002, 1}.index() + m);
        rec.total_assets = 1000.0;
        rec.total_liabilities = 600.0;
        rec.operating_cash_flow = (m == 1) ? -10.0 : 10.0;
        const double base = 30.0;
        // middle month constant prices -> zero volatility -> DD flagged
        const double step = (m == 1) ? 1.0 : 1.01;
        rec.daily_prices = {{{rec.date.year, rec.date.month, 1}, base},
                            {{rec.date.year, rec.date.month, 2}, base * step},
                            {{rec.date.year, rec.date.month, 3}, base * step * step}};
        panel.records.push_back(rec);
    }

    const auto dd = proxies::firm_dd_series(panel);
    REQUIRE(dd.values.size() == 3);
    CHECK(dd.values[0].second.has_value());
    CHECK_FALSE(dd.values[1].second.has_value());
    CHECK(dd.values[2].second.has_value());

    proxies::CfvOptions opts;
    opts.window_months = 2;
    const auto cfv = proxies::firm_cfv_series(panel, opts);
    REQUIRE(cfv.values.size() == 2);  // windows ending at months 2 and 3
    CHECK_FALSE(cfv.values[0].second.has_value());  // mean(10,-10) = 0 flagged
    CHECK(cfv.values[1].second.has_value());
}
