#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "drix/dates.hpp"

namespace drix::ingest {

struct FirmMonthRecord {
    YearMonth date;
    double total_assets = 0.0;
    double total_liabilities = 0.0;
    double operating_cash_flow = 0.0;
    std::vector<std::pair<YearMonthDay, double>> daily_prices;
    bool forward_filled = false;  // gap month patched from the previous one
};

struct FirmPanel {
    std::string firm_id;
    std::vector<FirmMonthRecord> records;  // strictly increasing, contiguous months
};

enum class Frequency { monthly, quarterly, annual };

std::string frequency_name(Frequency f);
Frequency parse_frequency(const std::string& name);

/// One macro series at its native frequency. For quarterly and annual series
/// the anchor date stored per observation is the LAST month of the native
/// period; mid-period knot placement is derived from it during disaggregation.
struct MacroTable {
    std::string series_name;
    Frequency native_frequency = Frequency::monthly;
    std::vector<std::pair<YearMonth, double>> observations;
};

struct RatingsSeries {
    std::vector<std::pair<int, double>> observations;  // (year, downgrade_pct)
};

/// Altman ratio inputs for one firm-month.
struct ZInputs {
    double x1 = 0.0;  // working capital / total assets
    double x2 = 0.0;  // retained earnings / total assets
    double x3 = 0.0;  // EBIT / total assets
    double x4 = 0.0;  // market equity / book liabilities
    double x5 = 0.0;  // sales / total assets

    bool operator==(const ZInputs&) const = default;
};

using ZRatioTable = std::map<std::string, std::vector<std::pair<YearMonth, ZInputs>>>;

struct IngestOptions {
    /// Patch missing interior months by carrying fundamentals forward
    /// (assets, liabilities, cash flow only; never prices). Default is to
    /// reject gaps outright.
    bool forward_fill_fundamentals = false;
    /// Accept gap years in the ratings series instead of erroring.
    bool ratings_allow_gaps = false;
};

// firms.csv: firm_id,date,total_assets,total_liabilities,operating_cash_flow (date YYYY-MM)
std::vector<FirmPanel> load_firm_panel(const std::string& path, const IngestOptions& opts = {});

// prices.csv: firm_id,date,close (date YYYY-MM-DD); merges into existing panels and
// enforces the >=2-prices-per-month invariant on non-filled records.
void attach_prices(std::vector<FirmPanel>& panels, const std::string& path);

// macro_<name>.csv: date,value with the frequency declared by the caller.
MacroTable load_macro_table(const std::string& path, Frequency declared_frequency,
                            const std::string& series_name = "");

// ratings.csv: year,downgrade_pct
RatingsSeries load_ratings(const std::string& path, const IngestOptions& opts = {});

// zratios.csv: firm_id,date,x1,x2,x3,x4,x5 (date YYYY-MM)
ZRatioTable load_z_ratios(const std::string& path);

// weights.csv: firm_id,weight
std::map<std::string, double> load_weights(const std::string& path);

// Emitters, exact inverses of the loaders (shortest round-trip formatting).
void write_firm_panel(const std::vector<FirmPanel>& panels, const std::string& firms_path,
                      const std::string& prices_path);
void write_macro_table(const MacroTable& table, const std::string& path);
void write_ratings(const RatingsSeries& ratings, const std::string& path);
void write_z_ratios(const ZRatioTable& ratios, const std::string& path);

}  // namespace drix::ingest
