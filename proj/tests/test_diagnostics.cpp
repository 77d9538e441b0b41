#include <doctest.h>

#include <random>

#include "drix/diagnostics.hpp"
#include "drix/errors.hpp"
#include "drix/stats.hpp"

using namespace drix;

namespace {

struct Sim {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
};

// y linear in two regressors plus iid noise; the null holds for both the
// serial-correlation and the specification test.
Sim null_dgp(unsigned seed, int T) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    Sim s;
    s.X.resize(T, 3);
    s.y.resize(T);
    for (int t = 0; t < T; ++t) {
        s.X(t, 0) = 1.0;
        s.X(t, 1) = d(gen);
        s.X(t, 2) = d(gen);
        s.y(t) = 0.5 + 1.2 * s.X(t, 1) - 0.7 * s.X(t, 2) + d(gen);
    }
    return s;
}

}  // namespace

TEST_CASE("breusch_godfrey on iid residuals rarely rejects") {
    int rejections = 0;
    for (unsigned seed = 0; seed < 100; ++seed) {
        const auto s = null_dgp(seed, 150);
        const auto fit = ols::ols_fit(s.y, s.X, {"const", "x1", "x2"});
        const auto bg = diag::breusch_godfrey(fit, s.X, 12);
        CHECK(bg.df1 == 12);
        CHECK(bg.df2 == 0);
        if (bg.reject_at_5pct) ++rejections;
    }
    CHECK(rejections <= 10);
}

TEST_CASE("breusch_godfrey detects AR(1) residuals") {
    std::mt19937 gen(17);
    std::normal_distribution<double> d(0.0, 1.0);
    const int T = 200;
    Eigen::VectorXd y(T);
    Eigen::MatrixXd X(T, 2);
    double u = 0.0;
    for (int t = 0; t < T; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = d(gen);
        u = 0.7 * u + d(gen);
        y(t) = 0.4 * X(t, 1) + u;
    }
    const auto fit = ols::ols_fit(y, X, {"const", "x"});
    const auto bg = diag::breusch_godfrey(fit, X, 12);
    CHECK(bg.reject_at_5pct);
    CHECK(bg.p_value < 0.01);
}

TEST_CASE("breusch_godfrey guards its preconditions") {
    const auto s = null_dgp(3, 20);
    const auto fit = ols::ols_fit(s.y, s.X, {"const", "x1", "x2"});
    CHECK_THROWS_AS(diag::breusch_godfrey(fit, s.X, 0), ValidationError);
    CHECK_THROWS_AS(diag::breusch_godfrey(fit, s.X, 18), ValidationError);
}

TEST_CASE("ramsey_reset under the null and under quadratic misspecification") {
    SUBCASE("linear DGP: rejection is rare") {
        int rejections = 0;
        for (unsigned seed = 0; seed < 100; ++seed) {
            const auto s = null_dgp(500 + seed, 150);
            const auto r = diag::ramsey_reset(s.y, s.X, {2, 3});
            CHECK(r.df1 == 2);
            if (r.reject_at_5pct) ++rejections;
        }
        CHECK(rejections <= 10);
    }
    SUBCASE("y = x^2 fitted linearly: strong rejection") {
        std::mt19937 gen(31);
        std::normal_distribution<double> d(0.0, 1.0);
        const int T = 200;
        Eigen::VectorXd y(T);
        Eigen::MatrixXd X(T, 2);
        for (int t = 0; t < T; ++t) {
            X(t, 0) = 1.0;
            X(t, 1) = d(gen);
            y(t) = X(t, 1) * X(t, 1) + 0.3 * d(gen);
        }
        const auto r = diag::ramsey_reset(y, X, {2, 3});
        CHECK(r.reject_at_5pct);
        CHECK(r.p_value < 1e-6);
    }
    SUBCASE("perfect fit is degenerate") {
        Eigen::VectorXd y(10);
        Eigen::MatrixXd X(10, 2);
        for (int t = 0; t < 10; ++t) {
            X(t, 0) = 1.0;
            X(t, 1) = t;
            y(t) = 3.0 * t + 1.0;
        }
        CHECK_THROWS_AS(diag::ramsey_reset(y, X, {2}), NumericError);
    }
    SUBCASE("powers outside {2,3,4} rejected") {
        const auto s = null_dgp(9, 60);
        CHECK_THROWS_AS(diag::ramsey_reset(s.y, s.X, {1}), ValidationError);
        CHECK_THROWS_AS(diag::ramsey_reset(s.y, s.X, {}), ValidationError);
    }
}

TEST_CASE("null rejection rates land in the calibrated band") {
    // 200 replications at the 5% level; binomial noise keeps this within
    // [2%, 9%] for a correctly sized test.
    int bg_reject = 0, reset_reject = 0;
    for (unsigned seed = 0; seed < 200; ++seed) {
        const auto s = null_dgp(9000 + seed, 120);
        const auto fit = ols::ols_fit(s.y, s.X, {"const", "x1", "x2"});
        if (diag::breusch_godfrey(fit, s.X, 12).reject_at_5pct) ++bg_reject;
        if (diag::ramsey_reset(s.y, s.X, {2, 3}).reject_at_5pct) ++reset_reject;
    }
    CHECK(bg_reject >= 4);    // 2% of 200
    CHECK(bg_reject <= 18);   // 9% of 200
    CHECK(reset_reject >= 4);
    CHECK(reset_reject <= 18);
}

TEST_CASE("collinearity_report: orthogonal design") {
    // Mean-zero, mutually orthogonal, equal-norm columns; also orthogonal to
    // the intercept, so every VIF and condition index is exactly 1.
    Eigen::MatrixXd X(4, 3);
    X << 1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1;
    const auto rep = diag::collinearity_report(X, {"a", "b", "c"});
    for (double v : rep.vif) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
    for (double ci : rep.condition_indices) CHECK(ci == doctest::Approx(1.0).epsilon(1e-10));
    for (int i = 0; i < 3; ++i) CHECK(rep.correlation(i, i) == 1.0);
}

TEST_CASE("collinearity_report: near-duplicate columns") {
    std::mt19937 gen(23);
    std::normal_distribution<double> d(0.0, 1.0);
    const int T = 120;
    Eigen::MatrixXd X(T, 3);
    for (int t = 0; t < T; ++t) {
        X(t, 0) = d(gen);
        X(t, 1) = X(t, 0) + 1e-4 * d(gen);
        X(t, 2) = d(gen);
    }
    const auto rep = diag::collinearity_report(X, {"x", "x_twin", "z"});

    // oracle: VIF_0 from the auxiliary regression of column 0 on the others
    {
        Eigen::MatrixXd A(T, 3);
        Eigen::VectorXd target = X.col(0);
        for (int t = 0; t < T; ++t) {
            A(t, 0) = 1.0;
            A(t, 1) = X(t, 1);
            A(t, 2) = X(t, 2);
        }
        const auto aux = ols::ols_fit(target, A, {"const", "x_twin", "z"});
        CHECK(rep.vif[0] == doctest::Approx(1.0 / (1.0 - aux.r2)).epsilon(1e-8));
    }
    CHECK(rep.vif[0] > 1e4);
    CHECK(rep.condition_indices.back() > 30.0);

    // both drivers of the degenerate direction load above 0.5 on the top index
    const Eigen::Index last = static_cast<Eigen::Index>(rep.condition_indices.size()) - 1;
    CHECK(rep.variance_decomposition(last, 1) > 0.5);  // "x" (after intercept)
    CHECK(rep.variance_decomposition(last, 2) > 0.5);  // "x_twin"

    // variance-decomposition proportions sum to one per coefficient
    for (Eigen::Index j = 0; j < rep.variance_decomposition.cols(); ++j)
        CHECK(rep.variance_decomposition.col(j).sum() == doctest::Approx(1.0).epsilon(1e-8));

    CHECK(rep.correlation(0, 1) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("VIF invariant to column rescaling") {
    std::mt19937 gen(29);
    std::normal_distribution<double> d(0.0, 1.0);
    const int T = 90;
    Eigen::MatrixXd X(T, 3);
    for (int t = 0; t < T; ++t) {
        X(t, 0) = d(gen);
        X(t, 1) = 0.6 * X(t, 0) + d(gen);
        X(t, 2) = d(gen);
    }
    Eigen::MatrixXd scaled = X;
    scaled.col(1) *= 1234.5;
    const auto a = diag::collinearity_report(X, {"p", "q", "r"});
    const auto b = diag::collinearity_report(scaled, {"p", "q", "r"});
    for (size_t j = 0; j < a.vif.size(); ++j)
        CHECK(a.vif[j] == doctest::Approx(b.vif[j]).epsilon(1e-10));
}

TEST_CASE("collinearity_report rejects constant columns and tiny designs") {
    Eigen::MatrixXd X(10, 2);
    X.col(0).setConstant(3.0);
    X.col(1).setRandom();
    CHECK_THROWS_WITH_AS(diag::collinearity_report(X, {"flat", "ok"}),
                         doctest::Contains("flat"), ValidationError);
    Eigen::MatrixXd one(10, 1);
    one.setRandom();
    CHECK_THROWS_AS(diag::collinearity_report(one, {"solo"}), ValidationError);
}
