#include "drix/prep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "drix/csv.hpp"
#include "drix/errors.hpp"
#include "drix/ols.hpp"
#include "drix/stats.hpp"

namespace drix::prep {

MonthlySeries to_monthly(const ingest::MacroTable& table) {
    if (table.native_frequency != ingest::Frequency::monthly)
        throw ValidationError("to_monthly: series '" + table.series_name + "' is not monthly");
    if (table.observations.empty())
        throw ValidationError("to_monthly: series '" + table.series_name + "' is empty");
    MonthlySeries out;
    out.start = table.observations.front().first;
    out.values.reserve(table.observations.size());
    int expected = out.start.index();
    for (const auto& [ym, v] : table.observations) {
        if (ym.index() != expected)
            throw ValidationError("to_monthly: series '" + table.series_name +
                                  "' has a gap before " + ym.str());
        out.values.push_back(v);
        ++expected;
    }
    return out;
}

MonthlySeries to_monthly(const proxies::ProxySeries& series) {
    ingest::MacroTable t;
    t.series_name = series.name;
    t.native_frequency = ingest::Frequency::monthly;
    t.observations = series.observations;
    return to_monthly(t);
}

MonthlySeries pct_change(const MonthlySeries& levels) {
    if (levels.values.size() < 2)
        throw ValidationError("pct_change: need at least 2 observations");
    MonthlySeries out;
    out.start = levels.month_at(1);
    out.values.reserve(levels.values.size() - 1);
    for (size_t t = 1; t < levels.values.size(); ++t) {
        const double prev = levels.values[t - 1];
        if (prev == 0.0)
            throw NumericError("pct_change: zero level at " + levels.month_at(t - 1).str());
        out.values.push_back(100.0 * (levels.values[t] - prev) / prev);
    }
    return out;
}

MonthlySeries first_difference(const MonthlySeries& levels) {
    if (levels.values.size() < 2)
        throw ValidationError("first_difference: need at least 2 observations");
    MonthlySeries out;
    out.start = levels.month_at(1);
    out.values.reserve(levels.values.size() - 1);
    for (size_t t = 1; t < levels.values.size(); ++t)
        out.values.push_back(levels.values[t] - levels.values[t - 1]);
    return out;
}

MonthlySeries log_transform(const MonthlySeries& levels) {
    MonthlySeries out;
    out.start = levels.start;
    out.values.reserve(levels.values.size());
    for (size_t t = 0; t < levels.values.size(); ++t) {
        if (!(levels.values[t] > 0.0))
            throw NumericError("log_transform: non-positive value at " + levels.month_at(t).str());
        out.values.push_back(std::log(levels.values[t]));
    }
    return out;
}

MonthlySeries dlog_transform(const MonthlySeries& levels) {
    MonthlySeries out = first_difference(log_transform(levels));
    for (double& v : out.values) v *= 100.0;
    return out;
}

MonthlySeries lag(const MonthlySeries& series, int months) {
    if (months < 0) throw ValidationError("lag: negative lag");
    MonthlySeries out;
    out.start = YearMonth::from_index(series.start.index() + months);
    out.values = series.values;
    return out;
}

// ---- spline -----------------------------------------------------------------

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 3) throw ValidationError("cubic spline needs at least 3 knots");
    if (y_.size() != n) throw ValidationError("cubic spline: knot count mismatch");
    for (size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw ValidationError("cubic spline: knot abscissae must be strictly increasing");

    // Second derivatives from the standard tridiagonal system with natural
    // end conditions m_0 = m_{n-1} = 0 (Thomas algorithm).
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    for (size_t i = 2; i + 1 < n; ++i) {
        const double lower = x_[i] - x_[i - 1];
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * (i + 2 < n ? m_[i + 1] : 0.0)) / diag[i];
        if (i == 1) break;
    }
}

double NaturalCubicSpline::operator()(double x) const {
    if (x < x_.front() || x > x_.back()) {
        std::ostringstream msg;
        msg << "spline evaluation outside knot range: " << x << " not in [" << x_.front() << ", "
            << x_.back() << "]";
        throw NumericError(msg.str());
    }
    // Locate the segment [x_i, x_{i+1}] containing x.
    size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    if (i > 0) --i;
    if (i >= x_.size() - 1) i = x_.size() - 2;

    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

MonthlySeries cubic_spline_to_monthly(const ingest::MacroTable& low_freq,
                                      const SplineOptions& opts) {
    if (low_freq.native_frequency == ingest::Frequency::monthly)
        throw ValidationError("cubic_spline_to_monthly: series '" + low_freq.series_name +
                              "' is already monthly");
    if (low_freq.observations.size() < 3)
        throw ValidationError("cubic_spline_to_monthly: series '" + low_freq.series_name +
                              "' has fewer than 3 knots");

    // Observation anchors are period-END months; mid placement shifts them
    // into the middle of the native period.
    int shift = 0;
    if (opts.placement == KnotPlacement::period_mid)
        shift = (low_freq.native_frequency == ingest::Frequency::quarterly) ? -1 : -6;

    std::vector<double> xs, ys;
    xs.reserve(low_freq.observations.size());
    ys.reserve(low_freq.observations.size());
    for (const auto& [anchor, value] : low_freq.observations) {
        xs.push_back(static_cast<double>(anchor.index() + shift));
        ys.push_back(value);
    }
    NaturalCubicSpline spline(xs, ys);

    MonthlySeries out;
    const int first = static_cast<int>(xs.front());
    const int last = static_cast<int>(xs.back());
    out.start = YearMonth::from_index(first);
    out.values.reserve(last - first + 1);
    for (int m = first; m <= last; ++m) out.values.push_back(spline(static_cast<double>(m)));
    return out;
}

// ---- stationarity -------------------------------------------------------------

namespace {

// MacKinnon (2010) response-surface critical values, constant, no trend.
struct CritSurface {
    double b0, b1, b2, b3;
};
constexpr CritSurface kCrit1{-3.43035, -6.5393, -16.786, -79.433};
constexpr CritSurface kCrit5{-2.86154, -2.8903, -4.234, -40.04};
constexpr CritSurface kCrit10{-2.56677, -1.5384, -2.809, 0.0};

double crit_value(const CritSurface& c, double T) {
    return c.b0 + c.b1 / T + c.b2 / (T * T) + c.b3 / (T * T * T);
}

struct DfRegression {
    ols::RegressionFit fit;
    int nobs;
};

// Dickey-Fuller regression with p lagged differences, constant included.
DfRegression df_regression(const std::vector<double>& y, int p) {
    const int n = static_cast<int>(y.size());
    const int ndiff = n - 1;
    const int nobs = ndiff - p;
    if (nobs <= p + 2) throw ValidationError("unit root test: series too short for lag order");

    Eigen::VectorXd dy(nobs);
    Eigen::MatrixXd X(nobs, 2 + p);
    std::vector<std::string> names{"const", "level_lag1"};
    for (int j = 1; j <= p; ++j) names.push_back("dlag" + std::to_string(j));
    for (int t = 0; t < nobs; ++t) {
        const int i = t + p;  // index into the difference series
        dy(t) = y[i + 1] - y[i];
        X(t, 0) = 1.0;
        X(t, 1) = y[i];
        for (int j = 1; j <= p; ++j) X(t, 1 + j) = y[i - j + 1] - y[i - j];
    }
    return {ols::ols_fit(dy, X, std::move(names)), nobs};
}

}  // namespace

UnitRootResult unit_root_test(const std::vector<double>& series, UnitRootMethod method,
                              int max_lag_or_bandwidth) {
    const int n = static_cast<int>(series.size());
    if (n < 20) throw ValidationError("unit root test: series shorter than 20 observations");
    {
        const double first = series.front();
        bool constant = true;
        for (double v : series)
            if (v != first) {
                constant = false;
                break;
            }
        if (constant) throw ValidationError("unit root test: degenerate constant series");
    }

    UnitRootResult out;
    out.method = method;
    double T_for_crit = 0.0;

    if (method == UnitRootMethod::adf) {
        const int max_lag = (max_lag_or_bandwidth < 0) ? 12 : max_lag_or_bandwidth;
        const int usable = std::min(max_lag, std::max(0, (n - 1) / 2 - 3));

        // Selection compares AICs on the common sample trimmed at max lag,
        // then the chosen order is refit on its own maximal sample.
        int best_p = 0;
        double best_aic = std::numeric_limits<double>::infinity();
        const int common_head = usable;
        for (int p = 0; p <= usable; ++p) {
            std::vector<double> tail(series.begin() + (common_head - p), series.end());
            const auto reg = df_regression(tail, p);
            if (reg.fit.aic < best_aic) {
                best_aic = reg.fit.aic;
                best_p = p;
            }
        }
        const auto reg = df_regression(series, best_p);
        out.test_statistic = reg.fit.t_stat(1);
        out.lag_or_bandwidth = best_p;
        T_for_crit = static_cast<double>(reg.nobs);
    } else {
        const auto reg = df_regression(series, 0);
        const int T = reg.nobs;
        const int q = (max_lag_or_bandwidth < 0)
                          ? static_cast<int>(std::floor(4.0 * std::pow(T / 100.0, 2.0 / 9.0)))
                          : max_lag_or_bandwidth;

        const Eigen::VectorXd& u = reg.fit.residuals;
        const double gamma0 = u.squaredNorm() / static_cast<double>(T);
        double lam2 = gamma0;
        for (int j = 1; j <= q; ++j) {
            double gj = 0.0;
            for (int t = j; t < T; ++t) gj += u(t) * u(t - j);
            gj /= static_cast<double>(T);
            lam2 += 2.0 * (1.0 - static_cast<double>(j) / (q + 1.0)) * gj;
        }
        if (!(lam2 > 0.0))
            throw NumericError("phillips-perron: non-positive long-run variance estimate");

        const double t_stat = reg.fit.t_stat(1);
        const double se_delta = reg.fit.stderrs(1);
        const double s = std::sqrt(reg.fit.ssr / static_cast<double>(T - reg.fit.k_params));
        const double z_tau = std::sqrt(gamma0 / lam2) * t_stat -
                             0.5 * (lam2 - gamma0) / std::sqrt(lam2) *
                                 (static_cast<double>(T) * se_delta / s);
        out.test_statistic = z_tau;
        out.lag_or_bandwidth = q;
        T_for_crit = static_cast<double>(T);
    }

    out.critical_values["1%"] = crit_value(kCrit1, T_for_crit);
    out.critical_values["5%"] = crit_value(kCrit5, T_for_crit);
    out.critical_values["10%"] = crit_value(kCrit10, T_for_crit);
    out.reject_unit_root_at_5pct = out.test_statistic < out.critical_values["5%"];
    return out;
}

// ---- alignment ----------------------------------------------------------------

const AlignedColumn* AlignedDataset::find(const std::string& name) const {
    if (y.name == name) return &y;
    for (const auto& c : proxies)
        if (c.name == name) return &c;
    for (const auto& c : controls)
        if (c.name == name) return &c;
    return nullptr;
}

SourceSeries make_source(std::string name, const MonthlySeries& series,
                         std::vector<std::string> transforms) {
    SourceSeries out;
    out.name = std::move(name);
    out.data.series_name = out.name;
    out.data.native_frequency = ingest::Frequency::monthly;
    for (size_t i = 0; i < series.values.size(); ++i)
        out.data.observations.emplace_back(series.month_at(i), series.values[i]);
    out.transforms = std::move(transforms);
    return out;
}

SourceSeries make_source(std::string name, const proxies::ProxySeries& series,
                         std::vector<std::string> transforms) {
    SourceSeries out;
    out.name = std::move(name);
    out.data.series_name = out.name;
    out.data.native_frequency = ingest::Frequency::monthly;
    out.data.observations = series.observations;
    out.transforms = std::move(transforms);
    return out;
}

namespace {

struct PreparedColumn {
    std::string name;
    MonthlySeries series;
    ColumnMeta meta;
};

PreparedColumn prepare(const SourceSeries& src, const SplineOptions& spline_opts) {
    PreparedColumn out;
    out.name = src.name;
    out.meta.native_frequency = ingest::frequency_name(src.data.native_frequency);

    std::string chain;
    if (src.data.native_frequency != ingest::Frequency::monthly) {
        out.series = cubic_spline_to_monthly(src.data, spline_opts);
        chain = "spline";
    } else {
        out.series = to_monthly(src.data);
    }
    for (const auto& t : src.transforms) {
        try {
            if (t == "log")
                out.series = log_transform(out.series);
            else if (t == "pct")
                out.series = pct_change(out.series);
            else if (t == "diff")
                out.series = first_difference(out.series);
            else if (t == "dlog")
                out.series = dlog_transform(out.series);
            else
                throw ValidationError("unknown transform '" + t + "' for column '" + src.name + "'");
        } catch (const NumericError& e) {
            throw NumericError("column '" + src.name + "': " + e.what());
        }
        chain += (chain.empty() ? "" : "+") + t;
    }
    out.meta.transforms = chain.empty() ? "none" : chain;
    return out;
}

}  // namespace

AlignedDataset build_aligned(const SourceSeries& y, const std::vector<SourceSeries>& proxy_cols,
                             const std::vector<SourceSeries>& control_cols,
                             const BuildConfig& config) {
    const auto y_prep = prepare(y, config.spline);

    std::vector<PreparedColumn> prepared;
    prepared.reserve(proxy_cols.size() + control_cols.size() + 1);
    for (const auto& src : proxy_cols) prepared.push_back(prepare(src, config.spline));
    const size_t n_proxies = prepared.size();
    for (const auto& src : control_cols) prepared.push_back(prepare(src, config.spline));

    if (config.y_lag > 0) {
        PreparedColumn lag_col;
        lag_col.name = config.y_lag_name;
        lag_col.series = lag(y_prep.series, config.y_lag);
        lag_col.meta.native_frequency = y_prep.meta.native_frequency;
        lag_col.meta.transforms = y_prep.meta.transforms + "+lag" + std::to_string(config.y_lag);
        prepared.push_back(std::move(lag_col));
    }

    int start = y_prep.series.start.index();
    int end = y_prep.series.last().index();
    std::string start_binder = y_prep.name, end_binder = y_prep.name;
    for (const auto& col : prepared) {
        if (col.series.start.index() > start) {
            start = col.series.start.index();
            start_binder = col.name;
        }
        if (col.series.last().index() < end) {
            end = col.series.last().index();
            end_binder = col.name;
        }
    }
    const int T = end - start + 1;
    if (T < config.min_aligned_months) {
        std::ostringstream msg;
        msg << "build_aligned: only " << std::max(T, 0) << " aligned months (need >= "
            << config.min_aligned_months << "); window bound by columns '" << start_binder
            << "' (start) and '" << end_binder << "' (end)";
        throw ValidationError(msg.str());
    }

    auto slice = [&](const MonthlySeries& s) {
        const size_t offset = static_cast<size_t>(start - s.start.index());
        return std::vector<double>(s.values.begin() + offset, s.values.begin() + offset + T);
    };

    AlignedDataset out;
    out.dates.reserve(T);
    for (int m = start; m <= end; ++m) out.dates.push_back(YearMonth::from_index(m));
    out.y = {y_prep.name, ColumnRole::dependent, slice(y_prep.series), y_prep.meta};
    for (size_t i = 0; i < prepared.size(); ++i) {
        AlignedColumn col{prepared[i].name,
                          i < n_proxies ? ColumnRole::proxy : ColumnRole::control,
                          slice(prepared[i].series), prepared[i].meta};
        if (i < n_proxies)
            out.proxies.push_back(std::move(col));
        else
            out.controls.push_back(std::move(col));
    }
    return out;
}

namespace {

std::string role_name(ColumnRole role) {
    switch (role) {
        case ColumnRole::dependent: return "y";
        case ColumnRole::proxy: return "proxy";
        case ColumnRole::control: return "control";
    }
    return "?";
}

}  // namespace

void write_aligned_csv(const AlignedDataset& data, const std::string& path) {
    std::vector<std::string> comments{"aligned dataset v1"};
    std::vector<const AlignedColumn*> cols{&data.y};
    for (const auto& c : data.proxies) cols.push_back(&c);
    for (const auto& c : data.controls) cols.push_back(&c);
    for (const auto* c : cols)
        comments.push_back("column " + c->name + " role=" + role_name(c->role) +
                           " native=" + c->meta.native_frequency +
                           " transforms=" + c->meta.transforms);

    std::vector<std::string> header{"date"};
    for (const auto* c : cols) header.push_back(c->name);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(data.rows());
    for (size_t t = 0; t < data.rows(); ++t) {
        std::vector<std::string> row{data.dates[t].str()};
        for (const auto* c : cols) row.push_back(csv::format_double(c->values[t]));
        rows.push_back(std::move(row));
    }
    csv::write_file(path, header, rows, comments);
}

AlignedDataset read_aligned_csv(const std::string& path) {
    // Column roles and transform chains ride in the leading comment lines.
    std::map<std::string, std::pair<ColumnRole, ColumnMeta>> meta;
    {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open '" + path + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] != '#') break;
            std::istringstream ss(line.substr(1));
            std::string tag;
            ss >> tag;
            if (tag != "column") continue;
            std::string name, token;
            ss >> name;
            ColumnRole role = ColumnRole::control;
            ColumnMeta m;
            while (ss >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = token.substr(0, eq);
                const std::string value = token.substr(eq + 1);
                if (key == "role")
                    role = value == "y" ? ColumnRole::dependent
                                        : (value == "proxy" ? ColumnRole::proxy : ColumnRole::control);
                else if (key == "native")
                    m.native_frequency = value;
                else if (key == "transforms")
                    m.transforms = value;
            }
            meta[name] = {role, m};
        }
    }

    auto table = csv::read_file(path);
    if (table.header.empty() || table.header[0] != "date")
        throw ValidationError(path + ": aligned csv must start with a 'date' column");

    AlignedDataset out;
    std::vector<AlignedColumn*> cols;
    bool have_y = false;
    for (size_t j = 1; j < table.header.size(); ++j) {
        const std::string& name = table.header[j];
        auto it = meta.find(name);
        const ColumnRole role = (it != meta.end()) ? it->second.first : ColumnRole::control;
        const ColumnMeta m = (it != meta.end()) ? it->second.second : ColumnMeta{};
        if (role == ColumnRole::dependent) {
            out.y = {name, role, {}, m};
            have_y = true;
        } else if (role == ColumnRole::proxy) {
            out.proxies.push_back({name, role, {}, m});
        } else {
            out.controls.push_back({name, role, {}, m});
        }
    }
    if (!have_y) throw ValidationError(path + ": no dependent column declared in metadata");

    cols.clear();
    for (size_t j = 1; j < table.header.size(); ++j) {
        const std::string& name = table.header[j];
        cols.push_back(const_cast<AlignedColumn*>(out.find(name)));
    }
    for (const auto& row : table.rows) {
        out.dates.push_back(parse_year_month(row.fields[0]));
        for (size_t j = 1; j < table.header.size(); ++j)
            cols[j - 1]->values.push_back(csv::parse_double(table, row, static_cast<int>(j)));
    }
    return out;
}

}  // namespace drix::prep
