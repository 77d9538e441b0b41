#include "drix/ingest.hpp"

#include <algorithm>
#include <sstream>

#include "drix/csv.hpp"
#include "drix/errors.hpp"

namespace drix::ingest {

std::string frequency_name(Frequency f) {
    switch (f) {
        case Frequency::monthly: return "monthly";
        case Frequency::quarterly: return "quarterly";
        case Frequency::annual: return "annual";
    }
    return "?";
}

Frequency parse_frequency(const std::string& name) {
    if (name == "monthly") return Frequency::monthly;
    if (name == "quarterly") return Frequency::quarterly;
    if (name == "annual") return Frequency::annual;
    throw ValidationError("unknown frequency '" + name + "'");
}

std::vector<FirmPanel> load_firm_panel(const std::string& path, const IngestOptions& opts) {
    auto table = csv::read_file(path);
    csv::require_header(table, {"firm_id", "date", "total_assets", "total_liabilities",
                                "operating_cash_flow"});

    std::vector<FirmPanel> panels;
    std::map<std::string, size_t> index;
    for (const auto& row : table.rows) {
        const std::string& firm = row.fields[0];
        FirmMonthRecord rec;
        rec.date = parse_year_month(row.fields[1]);
        rec.total_assets = csv::parse_double(table, row, 2);
        rec.total_liabilities = csv::parse_double(table, row, 3);
        rec.operating_cash_flow = csv::parse_double(table, row, 4);

        if (!(rec.total_assets > 0.0)) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": firm '" << firm << "' " << rec.date.str()
                << ": total_assets must be strictly positive, got " << row.fields[2];
            throw ValidationError(msg.str());
        }
        if (!(rec.total_liabilities > 0.0)) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": firm '" << firm << "' " << rec.date.str()
                << ": total_liabilities must be strictly positive, got " << row.fields[3];
            throw ValidationError(msg.str());
        }

        auto it = index.find(firm);
        if (it == index.end()) {
            index.emplace(firm, panels.size());
            panels.push_back({firm, {std::move(rec)}});
            continue;
        }
        auto& records = panels[it->second].records;
        if (rec.date <= records.back().date) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": firm '" << firm
                << "': months out of order (" << rec.date.str() << " after "
                << records.back().date.str() << ")";
            throw ValidationError(msg.str());
        }
        const int gap = rec.date.index() - records.back().date.index();
        if (gap > 1) {
            if (!opts.forward_fill_fundamentals) {
                std::ostringstream msg;
                msg << path << ":" << row.line << ": firm '" << firm << "': missing month(s) between "
                    << records.back().date.str() << " and " << rec.date.str()
                    << " (set forward_fill to patch fundamentals)";
                throw ValidationError(msg.str());
            }
            for (int i = 1; i < gap; ++i) {
                FirmMonthRecord fill = records.back();
                fill.date = YearMonth::from_index(records.back().date.index() + 1);
                fill.daily_prices.clear();
                fill.forward_filled = true;
                records.push_back(std::move(fill));
            }
        }
        records.push_back(std::move(rec));
    }
    return panels;
}

void attach_prices(std::vector<FirmPanel>& panels, const std::string& path) {
    auto table = csv::read_file(path);
    csv::require_header(table, {"firm_id", "date", "close"});

    std::map<std::string, FirmPanel*> by_id;
    for (auto& p : panels) by_id[p.firm_id] = &p;

    for (const auto& row : table.rows) {
        const std::string& firm = row.fields[0];
        auto it = by_id.find(firm);
        if (it == by_id.end()) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": price row for unknown firm '" << firm << "'";
            throw ValidationError(msg.str());
        }
        const YearMonthDay day = parse_year_month_day(row.fields[1]);
        const double close = csv::parse_double(table, row, 2);
        if (!(close > 0.0)) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": non-positive close price for firm '" << firm
                << "' on " << day.str();
            throw ValidationError(msg.str());
        }
        auto& records = it->second->records;
        auto rec = std::lower_bound(records.begin(), records.end(), day.year_month(),
                                    [](const FirmMonthRecord& r, const YearMonth& ym) {
                                        return r.date < ym;
                                    });
        if (rec == records.end() || rec->date != day.year_month()) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": price for firm '" << firm << "' dated "
                << day.str() << " falls outside the firm's panel months";
            throw ValidationError(msg.str());
        }
        if (!rec->daily_prices.empty() && !(rec->daily_prices.back().first < day)) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": prices out of order for firm '" << firm << "' at "
                << day.str();
            throw ValidationError(msg.str());
        }
        rec->daily_prices.emplace_back(day, close);
    }

    for (const auto& p : panels)
        for (const auto& rec : p.records)
            if (!rec.forward_filled && rec.daily_prices.size() < 2) {
                std::ostringstream msg;
                msg << "firm '" << p.firm_id << "' " << rec.date.str() << ": " << path
                    << " supplies " << rec.daily_prices.size()
                    << " daily price(s); at least 2 per month are required";
                throw ValidationError(msg.str());
            }
}

MacroTable load_macro_table(const std::string& path, Frequency declared_frequency,
                            const std::string& series_name) {
    auto table = csv::read_file(path);
    csv::require_header(table, {"date", "value"});

    MacroTable out;
    out.series_name = series_name.empty() ? path : series_name;
    out.native_frequency = declared_frequency;
    for (const auto& row : table.rows) {
        const std::string& ds = row.fields[0];
        YearMonth anchor;
        try {
            switch (declared_frequency) {
                case Frequency::monthly: anchor = parse_year_month(ds); break;
                case Frequency::quarterly: anchor = parse_quarter(ds); break;
                case Frequency::annual: anchor = {parse_year(ds), 12}; break;
            }
        } catch (const ValidationError& e) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": date '" << ds << "' does not match declared "
                << frequency_name(declared_frequency) << " frequency (" << e.what() << ")";
            throw ValidationError(msg.str());
        }
        if (!out.observations.empty()) {
            if (anchor == out.observations.back().first) {
                std::ostringstream msg;
                msg << path << ":" << row.line << ": duplicate date '" << ds << "'";
                throw ValidationError(msg.str());
            }
            if (anchor < out.observations.back().first) {
                std::ostringstream msg;
                msg << path << ":" << row.line << ": dates out of order at '" << ds << "'";
                throw ValidationError(msg.str());
            }
        }
        out.observations.emplace_back(anchor, csv::parse_double(table, row, 1));
    }
    return out;
}

RatingsSeries load_ratings(const std::string& path, const IngestOptions& opts) {
    auto table = csv::read_file(path);
    csv::require_header(table, {"year", "downgrade_pct"});

    RatingsSeries out;
    for (const auto& row : table.rows) {
        const int year = parse_year(row.fields[0]);
        const double pct = csv::parse_double(table, row, 1);
        if (pct < 0.0 || pct > 100.0) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": downgrade_pct " << row.fields[1]
                << " outside [0,100]";
            throw ValidationError(msg.str());
        }
        if (!out.observations.empty()) {
            const int prev = out.observations.back().first;
            if (year <= prev) {
                std::ostringstream msg;
                msg << path << ":" << row.line << ": years out of order at " << year;
                throw ValidationError(msg.str());
            }
            if (year != prev + 1 && !opts.ratings_allow_gaps) {
                std::ostringstream msg;
                msg << path << ":" << row.line << ": gap between years " << prev << " and " << year
                    << " (set ratings_allow_gaps to accept)";
                throw ValidationError(msg.str());
            }
        }
        out.observations.emplace_back(year, pct);
    }
    return out;
}

ZRatioTable load_z_ratios(const std::string& path) {
    auto table = csv::read_file(path);
    csv::require_header(table, {"firm_id", "date", "x1", "x2", "x3", "x4", "x5"});

    ZRatioTable out;
    for (const auto& row : table.rows) {
        const std::string& firm = row.fields[0];
        const YearMonth date = parse_year_month(row.fields[1]);
        ZInputs z{csv::parse_double(table, row, 2), csv::parse_double(table, row, 3),
                  csv::parse_double(table, row, 4), csv::parse_double(table, row, 5),
                  csv::parse_double(table, row, 6)};
        if (z.x5 < 0.0) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": x5 (sales/assets) must be non-negative";
            throw ValidationError(msg.str());
        }
        auto& rows = out[firm];
        if (!rows.empty() && !(rows.back().first < date)) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": z-ratio months out of order for firm '" << firm
                << "'";
            throw ValidationError(msg.str());
        }
        rows.emplace_back(date, z);
    }
    return out;
}

std::map<std::string, double> load_weights(const std::string& path) {
    auto table = csv::read_file(path);
    csv::require_header(table, {"firm_id", "weight"});
    std::map<std::string, double> out;
    for (const auto& row : table.rows) {
        const double w = csv::parse_double(table, row, 1);
        if (w < 0.0) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": negative weight for firm '" << row.fields[0]
                << "'";
            throw ValidationError(msg.str());
        }
        if (!out.emplace(row.fields[0], w).second) {
            std::ostringstream msg;
            msg << path << ":" << row.line << ": duplicate weight for firm '" << row.fields[0]
                << "'";
            throw ValidationError(msg.str());
        }
    }
    return out;
}

void write_firm_panel(const std::vector<FirmPanel>& panels, const std::string& firms_path,
                      const std::string& prices_path) {
    std::vector<std::vector<std::string>> firm_rows;
    std::vector<std::vector<std::string>> price_rows;
    for (const auto& p : panels)
        for (const auto& rec : p.records) {
            firm_rows.push_back({p.firm_id, rec.date.str(), csv::format_double(rec.total_assets),
                                 csv::format_double(rec.total_liabilities),
                                 csv::format_double(rec.operating_cash_flow)});
            for (const auto& [day, close] : rec.daily_prices)
                price_rows.push_back({p.firm_id, day.str(), csv::format_double(close)});
        }
    csv::write_file(firms_path,
                    {"firm_id", "date", "total_assets", "total_liabilities", "operating_cash_flow"},
                    firm_rows);
    csv::write_file(prices_path, {"firm_id", "date", "close"}, price_rows);
}

void write_macro_table(const MacroTable& table, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [anchor, value] : table.observations) {
        std::string ds;
        switch (table.native_frequency) {
            case Frequency::monthly: ds = anchor.str(); break;
            case Frequency::quarterly: {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "%04d-Q%d", anchor.year, anchor.month / 3);
                ds = buf;
                break;
            }
            case Frequency::annual: {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "%04d", anchor.year);
                ds = buf;
                break;
            }
        }
        rows.push_back({ds, csv::format_double(value)});
    }
    csv::write_file(path, {"date", "value"}, rows);
}

void write_ratings(const RatingsSeries& ratings, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [year, pct] : ratings.observations) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%04d", year);
        rows.push_back({std::string(buf), csv::format_double(pct)});
    }
    csv::write_file(path, {"year", "downgrade_pct"}, rows);
}

void write_z_ratios(const ZRatioTable& ratios, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [firm, entries] : ratios)
        for (const auto& [date, z] : entries)
            rows.push_back({firm, date.str(), csv::format_double(z.x1), csv::format_double(z.x2),
                            csv::format_double(z.x3), csv::format_double(z.x4),
                            csv::format_double(z.x5)});
    csv::write_file(path, {"firm_id", "date", "x1", "x2", "x3", "x4", "x5"}, rows);
}

}  // namespace drix::ingest
