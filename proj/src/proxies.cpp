#include "drix/proxies.hpp"

#include <cmath>
#include <sstream>

#include "drix/errors.hpp"
#include "drix/stats.hpp"

namespace drix::proxies {

double monthly_stock_volatility(std::span<const double> closes) {
    if (closes.size() < 2) {
        std::ostringstream msg;
        msg << "monthly volatility needs at least 2 prices, got " << closes.size();
        throw NumericError(msg.str());
    }
    std::vector<double> returns;
    returns.reserve(closes.size() - 1);
    for (size_t i = 1; i < closes.size(); ++i) {
        if (!(closes[i - 1] > 0.0) || !(closes[i] > 0.0))
            throw NumericError("monthly volatility: prices must be strictly positive");
        returns.push_back(std::log(closes[i] / closes[i - 1]));
    }
    if (returns.size() < 2) return 0.0;
    return stats::sample_sd(returns);
}

double distance_to_default(double total_assets, double total_liabilities, double monthly_vol) {
    if (!(total_assets > 0.0) || !(total_liabilities > 0.0))
        throw NumericError("distance_to_default: assets and liabilities must be positive");
    if (!(monthly_vol > 0.0))
        throw NumericError("distance_to_default undefined: monthly volatility is zero");
    return (std::log(total_assets) - std::log(total_liabilities)) / monthly_vol;
}

double altman_z(const ingest::ZInputs& z, const ZCoefficients& coef) {
    const double ratios[] = {z.x1, z.x2, z.x3, z.x4, z.x5};
    for (double r : ratios)
        if (!std::isfinite(r)) throw NumericError("altman_z: non-finite ratio input");
    return coef.c1 * z.x1 + coef.c2 * z.x2 + coef.c3 * z.x3 + coef.c4 * z.x4 + coef.c5 * z.x5;
}

double cash_flow_volatility(std::span<const double> window, double mean_epsilon) {
    if (window.size() < 2) throw NumericError("cash_flow_volatility: window must have >= 2 months");
    const double m = stats::mean(window);
    if (std::fabs(m) <= mean_epsilon)
        throw NumericError("cash_flow_volatility undefined: window mean is near zero");
    return stats::sample_sd(window) / std::fabs(m);
}

FirmProxySeries firm_dd_series(const ingest::FirmPanel& panel) {
    FirmProxySeries out;
    out.values.reserve(panel.records.size());
    for (const auto& rec : panel.records) {
        if (rec.daily_prices.size() < 2) {
            out.values.emplace_back(rec.date, std::nullopt);
            continue;
        }
        std::vector<double> closes;
        closes.reserve(rec.daily_prices.size());
        for (const auto& [day, close] : rec.daily_prices) closes.push_back(close);
        const double vol = monthly_stock_volatility(closes);
        if (vol > 0.0)
            out.values.emplace_back(rec.date,
                                    distance_to_default(rec.total_assets, rec.total_liabilities, vol));
        else
            out.values.emplace_back(rec.date, std::nullopt);
    }
    return out;
}

FirmProxySeries firm_z_series(const ingest::FirmPanel& panel, const ingest::ZRatioTable& ratios,
                              const ZCoefficients& coef) {
    auto it = ratios.find(panel.firm_id);
    if (it == ratios.end())
        throw ValidationError("no z-ratio rows for firm '" + panel.firm_id + "'");
    FirmProxySeries out;
    out.values.reserve(it->second.size());
    for (const auto& [date, z] : it->second) out.values.emplace_back(date, altman_z(z, coef));
    return out;
}

FirmProxySeries firm_cfv_series(const ingest::FirmPanel& panel, const CfvOptions& opts) {
    if (opts.window_months < 2)
        throw ValidationError("cfv window must be at least 2 months");
    FirmProxySeries out;
    const auto& recs = panel.records;
    for (size_t t = static_cast<size_t>(opts.window_months) - 1; t < recs.size(); ++t) {
        std::vector<double> window;
        window.reserve(opts.window_months);
        for (size_t i = t + 1 - opts.window_months; i <= t; ++i)
            window.push_back(recs[i].operating_cash_flow);
        const double m = stats::mean(window);
        if (std::fabs(m) <= opts.mean_epsilon)
            out.values.emplace_back(recs[t].date, std::nullopt);
        else
            out.values.emplace_back(recs[t].date, stats::sample_sd(window) / std::fabs(m));
    }
    return out;
}

ProxySeries aggregate_firms(const std::map<std::string, FirmProxySeries>& per_firm,
                            const std::map<std::string, double>& weights, std::string name) {
    if (per_firm.empty()) throw ValidationError("aggregate_firms: no firm series supplied");

    double weight_sum = 0.0;
    for (const auto& [firm, series] : per_firm) {
        auto it = weights.find(firm);
        weight_sum += weights.empty() ? 1.0 : (it == weights.end() ? 0.0 : it->second);
    }
    if (!(weight_sum > 0.0)) throw ValidationError("aggregate_firms: weights sum to zero");

    // Aggregate over [first, last] defined month across all firms.
    int first = 0, last = 0;
    bool any = false;
    for (const auto& [firm, series] : per_firm)
        for (const auto& [ym, v] : series.values)
            if (v.has_value()) {
                if (!any || ym.index() < first) first = any ? std::min(first, ym.index()) : ym.index();
                if (!any || ym.index() > last) last = any ? std::max(last, ym.index()) : ym.index();
                any = true;
            }
    if (!any) throw ValidationError("aggregate_firms: no firm has any defined value");

    // One pass per firm with a moving cursor; firm series are month-sorted.
    struct Cursor {
        const FirmProxySeries* series;
        double weight;
        size_t pos = 0;
    };
    std::vector<Cursor> cursors;
    cursors.reserve(per_firm.size());
    for (const auto& [firm, series] : per_firm) {
        double w = 1.0;
        if (!weights.empty()) {
            auto it = weights.find(firm);
            w = (it == weights.end()) ? 0.0 : it->second;
        }
        if (w > 0.0) cursors.push_back({&series, w});
    }

    ProxySeries out;
    out.name = std::move(name);
    out.observations.reserve(last - first + 1);
    for (int idx = first; idx <= last; ++idx) {
        const YearMonth ym = YearMonth::from_index(idx);
        double num = 0.0, den = 0.0;
        for (auto& cur : cursors) {
            const auto& vals = cur.series->values;
            while (cur.pos < vals.size() && vals[cur.pos].first.index() < idx) ++cur.pos;
            if (cur.pos < vals.size() && vals[cur.pos].first.index() == idx &&
                vals[cur.pos].second.has_value()) {
                num += cur.weight * *vals[cur.pos].second;
                den += cur.weight;
            }
        }
        if (den <= 0.0)
            throw ValidationError("aggregate_firms: no defined value for any firm in " + ym.str());
        out.observations.emplace_back(ym, num / den);
    }
    return out;
}

}  // namespace drix::proxies
