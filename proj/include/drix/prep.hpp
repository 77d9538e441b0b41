#pragma once

#include <map>
#include <string>
#include <vector>

#include "drix/dates.hpp"
#include "drix/ingest.hpp"
#include "drix/proxies.hpp"

namespace drix::prep {

/// Contiguous monthly series: values[i] belongs to month start + i.
struct MonthlySeries {
    YearMonth start;
    std::vector<double> values;

    YearMonth month_at(size_t i) const { return YearMonth::from_index(start.index() + static_cast<int>(i)); }
    YearMonth last() const { return month_at(values.empty() ? 0 : values.size() - 1); }
};

MonthlySeries to_monthly(const ingest::MacroTable& table);   // monthly tables only; gaps rejected
MonthlySeries to_monthly(const proxies::ProxySeries& series);

/// 100 * (x_t - x_{t-1}) / x_{t-1}; one month shorter than the input.
MonthlySeries pct_change(const MonthlySeries& levels);

/// Plain first difference x_t - x_{t-1}.
MonthlySeries first_difference(const MonthlySeries& levels);

/// Elementwise natural log of positive levels.
MonthlySeries log_transform(const MonthlySeries& levels);

/// 100 * (ln x_t - ln x_{t-1}), the usual growth-rate form.
MonthlySeries dlog_transform(const MonthlySeries& levels);

MonthlySeries lag(const MonthlySeries& series, int months);

// ---- cubic-spline temporal disaggregation ----------------------------------

/// Natural cubic spline through strictly increasing knots; reproduces knot
/// values exactly and has zero second derivative at both ends.
class NaturalCubicSpline {
public:
    NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;            // x within [x_first, x_last]
    double second_derivative_at_knot(size_t i) const { return m_[i]; }
    size_t knot_count() const { return x_.size(); }

private:
    std::vector<double> x_, y_, m_;
};

enum class KnotPlacement { period_end, period_mid };

struct SplineOptions {
    KnotPlacement placement = KnotPlacement::period_end;
};

/// Places one knot per native period (quarterly or annual) and evaluates the
/// natural spline at every month between the first and last knot.
MonthlySeries cubic_spline_to_monthly(const ingest::MacroTable& low_freq,
                                      const SplineOptions& opts = {});

// ---- stationarity ------------------------------------------------------------

enum class UnitRootMethod { adf, phillips_perron };

struct UnitRootResult {
    UnitRootMethod method;
    double test_statistic = 0.0;
    int lag_or_bandwidth = 0;
    std::map<std::string, double> critical_values;  // "1%", "5%", "10%"
    bool reject_unit_root_at_5pct = false;
};

/// ADF: constant-only augmented regression, lag order chosen by AIC up to
/// max_lag_or_bandwidth (default 12 when negative). Phillips-Perron: zero-lag
/// regression with a Bartlett-kernel long-run variance correction; bandwidth
/// defaults to floor(4*(T/100)^(2/9)) when negative. Verdicts use MacKinnon
/// (2010) response-surface critical values for the constant-only case.
UnitRootResult unit_root_test(const std::vector<double>& series, UnitRootMethod method,
                              int max_lag_or_bandwidth = -1);

// ---- alignment ---------------------------------------------------------------

struct ColumnMeta {
    std::string transforms;        // e.g. "spline+log+pct" or "none"
    std::string native_frequency;  // monthly | quarterly | annual
};

enum class ColumnRole { dependent, proxy, control };

struct AlignedColumn {
    std::string name;
    ColumnRole role = ColumnRole::control;
    std::vector<double> values;
    ColumnMeta meta;
};

struct AlignedDataset {
    std::vector<YearMonth> dates;
    AlignedColumn y;
    std::vector<AlignedColumn> proxies;
    std::vector<AlignedColumn> controls;

    size_t rows() const { return dates.size(); }
    const AlignedColumn* find(const std::string& name) const;
};

/// One source column: data at native frequency plus the transform chain to
/// apply after any disaggregation. Valid transform tokens: log, pct, diff,
/// dlog.
struct SourceSeries {
    std::string name;  // name of the final column, e.g. "dDD"
    ingest::MacroTable data;
    std::vector<std::string> transforms;
};

SourceSeries make_source(std::string name, const MonthlySeries& series,
                         std::vector<std::string> transforms);
SourceSeries make_source(std::string name, const proxies::ProxySeries& series,
                         std::vector<std::string> transforms);

struct BuildConfig {
    SplineOptions spline;
    int y_lag = 1;  // 0 disables the lagged-dependent column
    std::string y_lag_name = "dYS_lag1";
    int min_aligned_months = 24;
};

/// Applies per-column transform chains (spline first for non-monthly data),
/// builds the lagged-dependent column, and trims everything to the common
/// valid month window.
AlignedDataset build_aligned(const SourceSeries& y, const std::vector<SourceSeries>& proxy_cols,
                             const std::vector<SourceSeries>& control_cols,
                             const BuildConfig& config = {});

void write_aligned_csv(const AlignedDataset& data, const std::string& path);
AlignedDataset read_aligned_csv(const std::string& path);

}  // namespace drix::prep
