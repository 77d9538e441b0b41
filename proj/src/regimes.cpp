#include "drix/regimes.hpp"

#include <sstream>

#include "drix/errors.hpp"
#include "drix/posthoc.hpp"

namespace drix::regimes {

RegimeWindow subprime_window() { return {"subprime", {2007, 7}, {2009, 3}}; }
RegimeWindow dotcom_window() { return {"dotcom", {2000, 1}, {2002, 12}}; }

std::vector<double> crisis_mask(const std::vector<YearMonth>& dates, const RegimeWindow& window) {
    if (window.end < window.start)
        throw ValidationError("crisis_mask: window '" + window.label + "' ends before it starts");
    std::vector<double> mask(dates.size(), 0.0);
    size_t ones = 0;
    for (size_t t = 0; t < dates.size(); ++t)
        if (window.start <= dates[t] && dates[t] <= window.end) {
            mask[t] = 1.0;
            ++ones;
        }
    if (ones == 0)
        throw ValidationError("crisis_mask: window '" + window.label + "' (" + window.start.str() +
                              ".." + window.end.str() + ") does not intersect the sample");
    return mask;
}

RegimeFit regime_regression(std::span<const double> delta_ys, std::span<const double> delta_rho,
                            std::span<const double> mask) {
    const size_t T = delta_ys.size();
    if (delta_rho.size() != T || mask.size() != T)
        throw ValidationError("regime_regression: series lengths differ");

    int n1 = 0;
    for (double m : mask) {
        if (m != 0.0 && m != 1.0)
            throw ValidationError("regime_regression: mask must be 0/1");
        if (m == 1.0) ++n1;
    }
    const int n0 = static_cast<int>(T) - n1;

    RegimeFit out;
    out.n_crisis = n1;
    out.n_non_crisis = n0;

    // Degenerate collapse: with a single populated regime the interaction
    // model algebraically reduces to the plain index regression.
    if (n1 == 0 || n0 == 0) {
        auto fit = posthoc::index_regression(delta_ys, delta_rho,
                                             n0 == 0 ? "d_rho_crisis" : "d_rho_noncrisis");
        out.collapsed = true;
        out.crisis_name = (n0 == 0) ? "d_rho_crisis" : "";
        out.non_crisis_name = (n1 == 0) ? "d_rho_noncrisis" : "";
        out.fit = std::move(fit);
        return out;
    }
    if (n1 < 12 || n0 < 12) {
        std::ostringstream msg;
        msg << "regime_regression: thin regime (crisis " << n1 << ", non-crisis " << n0
            << " observations; both need >= 12)";
        throw ValidationError(msg.str());
    }

    const auto Ti = static_cast<Eigen::Index>(T);
    Eigen::VectorXd y(Ti);
    Eigen::MatrixXd X(Ti, 3);
    for (Eigen::Index t = 0; t < Ti; ++t) {
        y(t) = delta_ys[t];
        X(t, 0) = 1.0;
        X(t, 1) = mask[t] * delta_rho[t];
        X(t, 2) = (1.0 - mask[t]) * delta_rho[t];
    }
    out.fit = ols::ols_fit(y, X, {"const", "d_rho_crisis", "d_rho_noncrisis"});
    out.crisis_name = "d_rho_crisis";
    out.non_crisis_name = "d_rho_noncrisis";
    return out;
}

}  // namespace drix::regimes
