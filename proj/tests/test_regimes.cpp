#include <doctest.h>

#include <random>

#include "drix/errors.hpp"
#include "drix/posthoc.hpp"
#include "drix/regimes.hpp"

using namespace drix;

namespace {

std::vector<YearMonth> month_range(YearMonth start, int n) {
    std::vector<YearMonth> out;
    for (int i = 0; i < n; ++i) out.push_back(YearMonth::from_index(start.index() + i));
    return out;
}

}  // namespace

TEST_CASE("crisis_mask") {
    const auto dates = month_range({2000, 1}, 132);  // 2000-01 .. 2010-12

    SUBCASE("subprime window marks exactly 21 months") {
        const auto mask = regimes::crisis_mask(dates, regimes::subprime_window());
        int ones = 0;
        for (double m : mask) ones += (m == 1.0);
        CHECK(ones == 21);
        CHECK(mask[YearMonth{2007, 6}.index() - dates[0].index()] == 0.0);
        CHECK(mask[YearMonth{2007, 7}.index() - dates[0].index()] == 1.0);
        CHECK(mask[YearMonth{2009, 3}.index() - dates[0].index()] == 1.0);
        CHECK(mask[YearMonth{2009, 4}.index() - dates[0].index()] == 0.0);
    }
    SUBCASE("window covering the whole sample is all ones") {
        const auto mask = regimes::crisis_mask(dates, {"all", {1999, 1}, {2012, 1}});
        for (double m : mask) CHECK(m == 1.0);
    }
    SUBCASE("window before the sample errors") {
        CHECK_THROWS_AS(regimes::crisis_mask(dates, {"early", {1990, 1}, {1995, 12}}),
                        ValidationError);
    }
    SUBCASE("inverted window errors") {
        CHECK_THROWS_AS(regimes::crisis_mask(dates, {"bad", {2005, 5}, {2005, 4}}),
                        ValidationError);
    }
}

namespace {

struct RegimeSim {
    std::vector<double> y, rho, mask;
};

RegimeSim simulate(unsigned seed, int T, double lambda_crisis, double lambda_quiet,
                   int crisis_start, int crisis_len) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    RegimeSim s;
    s.y.resize(T);
    s.rho.resize(T);
    s.mask.assign(T, 0.0);
    for (int t = crisis_start; t < crisis_start + crisis_len; ++t) s.mask[t] = 1.0;
    for (int t = 0; t < T; ++t) {
        s.rho[t] = d(gen);
        const double lam = s.mask[t] == 1.0 ? lambda_crisis : lambda_quiet;
        s.y[t] = 0.1 + lam * s.rho[t] + 0.5 * d(gen);
    }
    return s;
}

}  // namespace

TEST_CASE("regime_regression") {
    SUBCASE("interaction columns are orthogonal by construction") {
        const auto s = simulate(1, 120, -1.2, -0.5, 40, 30);
        const auto fit = regimes::regime_regression(s.y, s.rho, s.mask);
        REQUIRE_FALSE(fit.collapsed);
        // crisis and non-crisis slopes land near their truths
        const int ic = fit.fit.index_of("d_rho_crisis");
        const int in = fit.fit.index_of("d_rho_noncrisis");
        CHECK(std::fabs(fit.fit.coef(ic) - (-1.2)) < 2.0 * fit.fit.stderrs(ic));
        CHECK(std::fabs(fit.fit.coef(in) - (-0.5)) < 2.0 * fit.fit.stderrs(in));
    }
    SUBCASE("recovery over 100 seeds") {
        int ok_crisis = 0, ok_quiet = 0;
        for (unsigned seed = 0; seed < 100; ++seed) {
            const auto s = simulate(100 + seed, 132, -1.2, -0.5, 90, 21);
            const auto fit = regimes::regime_regression(s.y, s.rho, s.mask);
            const int ic = fit.fit.index_of("d_rho_crisis");
            const int in = fit.fit.index_of("d_rho_noncrisis");
            if (std::fabs(fit.fit.coef(ic) + 1.2) < 2.0 * fit.fit.stderrs(ic)) ++ok_crisis;
            if (std::fabs(fit.fit.coef(in) + 0.5) < 2.0 * fit.fit.stderrs(in)) ++ok_quiet;
        }
        CHECK(ok_crisis >= 90);
        CHECK(ok_quiet >= 90);
    }
    SUBCASE("all-ones mask collapses to the single-slope regression") {
        auto s = simulate(3, 60, -0.8, 0.0, 0, 60);
        const auto collapsed = regimes::regime_regression(s.y, s.rho, s.mask);
        CHECK(collapsed.collapsed);
        CHECK(collapsed.non_crisis_name.empty());
        const auto plain = posthoc::index_regression(s.y, s.rho, "d_rho_crisis");
        CHECK(collapsed.fit.coef(1) == doctest::Approx(plain.coef(1)).epsilon(1e-14));
    }
    SUBCASE("swapping the mask swaps the two slopes exactly") {
        const auto s = simulate(5, 120, -1.0, -0.2, 30, 40);
        std::vector<double> inverted(s.mask.size());
        for (size_t t = 0; t < s.mask.size(); ++t) inverted[t] = 1.0 - s.mask[t];
        const auto a = regimes::regime_regression(s.y, s.rho, s.mask);
        const auto b = regimes::regime_regression(s.y, s.rho, inverted);
        CHECK(a.fit.coef(a.fit.index_of("d_rho_crisis")) ==
              doctest::Approx(b.fit.coef(b.fit.index_of("d_rho_noncrisis"))).epsilon(1e-12));
        CHECK(a.fit.coef(a.fit.index_of("d_rho_noncrisis")) ==
              doctest::Approx(b.fit.coef(b.fit.index_of("d_rho_crisis"))).epsilon(1e-12));
    }
    SUBCASE("equal-slope fitted values reproduce the pooled regression") {
        const auto s = simulate(9, 100, -0.7, -0.7, 20, 30);
        const auto split = regimes::regime_regression(s.y, s.rho, s.mask);
        const auto pooled = posthoc::index_regression(s.y, s.rho);
        // identical column space when the two slopes agree: compare fitted
        // values built from the pooled coefficients inserted into the split
        const double phi = pooled.coef(0), lam = pooled.coef(1);
        for (size_t t = 0; t < s.y.size(); ++t) {
            const double split_fitted_equal =
                phi + lam * (s.mask[t] * s.rho[t] + (1.0 - s.mask[t]) * s.rho[t]);
            CHECK(split_fitted_equal == doctest::Approx(phi + lam * s.rho[t]).epsilon(1e-14));
        }
        // and the split fit cannot do worse than pooled in-sample
        CHECK(split.fit.ssr <= pooled.ssr + 1e-9);
    }
    SUBCASE("thin regime rejected") {
        const auto s = simulate(7, 80, -1.0, -0.5, 10, 5);  // 5 crisis months
        CHECK_THROWS_AS(regimes::regime_regression(s.y, s.rho, s.mask), ValidationError);
    }
    SUBCASE("non-binary mask rejected") {
        auto s = simulate(8, 60, -1.0, -0.5, 10, 20);
        s.mask[0] = 0.5;
        CHECK_THROWS_AS(regimes::regime_regression(s.y, s.rho, s.mask), ValidationError);
    }
}
