#include "drix/ols.hpp"

#include <cmath>
#include <sstream>

#include "drix/errors.hpp"
#include "drix/prep.hpp"
#include "drix/stats.hpp"

namespace drix::ols {

int RegressionFit::index_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

RegressionFit ols_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                      std::vector<std::string> names, const OlsOptions& opts) {
    const auto T = X.rows();
    const auto k = X.cols();
    if (static_cast<size_t>(k) != names.size())
        throw ValidationError("ols_fit: name count does not match design columns");
    if (y.size() != T) throw ValidationError("ols_fit: y length does not match design rows");
    if (T <= k) {
        std::ostringstream msg;
        msg << "ols_fit: insufficient data, " << T << " observations for " << k << " parameters";
        throw ValidationError(msg.str());
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = (sv(sv.size() - 1) > 0.0)
                            ? sv(0) / (sv(sv.size() - 1))
                            : std::numeric_limits<double>::infinity();
    if (!(cond < opts.condition_cap)) {
        // Columns loading on the near-null direction are the offenders.
        const Eigen::VectorXd v = svd.matrixV().col(sv.size() - 1);
        const double vmax = v.cwiseAbs().maxCoeff();
        std::ostringstream msg;
        msg << "ols_fit: singular design (condition number " << cond << "); offending columns:";
        for (Eigen::Index j = 0; j < k; ++j)
            if (std::fabs(v(j)) > 0.1 * vmax) msg << " " << names[j];
        throw NumericError(msg.str());
    }

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    RegressionFit fit;
    fit.names = std::move(names);
    fit.coef = qr.solve(y);
    fit.residuals = y - X * fit.coef;
    fit.ssr = fit.residuals.squaredNorm();
    fit.n_obs = static_cast<int>(T);
    fit.k_params = static_cast<int>(k);

    const double dof = static_cast<double>(T - k);
    const double sigma2 = fit.ssr / dof;

    // (X'X)^-1 from the triangular factor; the explicit normal-equations
    // route stays in the test oracle only.
    const Eigen::MatrixXd R = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::VectorXd xtx_inv_diag = (Rinv * Rinv.transpose()).diagonal();

    fit.stderrs = (sigma2 * xtx_inv_diag.array()).sqrt().matrix();
    fit.t_stat = fit.coef.array() / fit.stderrs.array();
    fit.p_value.resize(k);
    for (Eigen::Index j = 0; j < k; ++j)
        fit.p_value(j) = stats::t_p_twosided(fit.t_stat(j), dof);

    const double ymean = y.mean();
    const double sst = (y.array() - ymean).matrix().squaredNorm();
    fit.r2 = (sst > 0.0) ? 1.0 - fit.ssr / sst : 1.0;
    fit.adj_r2 = 1.0 - (1.0 - fit.r2) * (static_cast<double>(T) - 1.0) / dof;
    fit.aic = static_cast<double>(T) * std::log(fit.ssr / static_cast<double>(T)) +
              2.0 * static_cast<double>(k);

    double dw_num = 0.0;
    for (Eigen::Index t = 1; t < T; ++t) {
        const double d = fit.residuals(t) - fit.residuals(t - 1);
        dw_num += d * d;
    }
    const double dw_den = fit.residuals.squaredNorm();
    fit.durbin_watson = (dw_den > 0.0) ? dw_num / dw_den : 0.0;

    return fit;
}

std::string significance_stars(double p_value) {
    if (!(p_value >= 0.0) || !(p_value <= 1.0))
        throw NumericError("significance_stars: p-value outside [0,1]");
    if (p_value < 0.01) return "a";
    if (p_value < 0.05) return "b";
    if (p_value < 0.10) return "c";
    return "";
}

namespace {

RegressionFit fit_named(const prep::AlignedDataset& data, const std::vector<const prep::AlignedColumn*>& cols,
                        const OlsOptions& opts) {
    const auto T = static_cast<Eigen::Index>(data.rows());
    Eigen::VectorXd y(T);
    for (Eigen::Index t = 0; t < T; ++t) y(t) = data.y.values[t];

    Eigen::MatrixXd X(T, static_cast<Eigen::Index>(cols.size()) + 1);
    X.col(0).setOnes();
    std::vector<std::string> names{"const"};
    for (size_t j = 0; j < cols.size(); ++j) {
        names.push_back(cols[j]->name);
        for (Eigen::Index t = 0; t < T; ++t) X(t, static_cast<Eigen::Index>(j) + 1) = cols[j]->values[t];
    }
    return ols_fit(y, X, std::move(names), opts);
}

}  // namespace

RegressionFit fit_spread_model(const prep::AlignedDataset& data, const OlsOptions& opts) {
    std::vector<const prep::AlignedColumn*> cols;
    for (const auto& c : data.proxies) cols.push_back(&c);
    for (const auto& c : data.controls) cols.push_back(&c);
    if (cols.empty()) throw ValidationError("fit_spread_model: dataset has no columns");
    return fit_named(data, cols, opts);
}

RegressionFit fit_columns(const prep::AlignedDataset& data,
                          const std::vector<std::string>& column_names, const OlsOptions& opts) {
    std::vector<const prep::AlignedColumn*> cols;
    for (const auto& name : column_names) {
        const auto* col = data.find(name);
        if (!col) throw ValidationError("fit_columns: missing column '" + name + "'");
        cols.push_back(col);
    }
    return fit_named(data, cols, opts);
}

}  // namespace drix::ols
