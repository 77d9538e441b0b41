#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace drix {

/// Calendar month, the native time unit of the aligned dataset.
struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    /// Months since 0000-01; makes lag/interval arithmetic trivial.
    int index() const { return year * 12 + (month - 1); }

    static YearMonth from_index(int idx);

    YearMonth next() const { return from_index(index() + 1); }
    YearMonth prev() const { return from_index(index() - 1); }

    std::string str() const;  // "YYYY-MM"
};

/// Calendar day, used only for daily price rows.
struct YearMonthDay {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const YearMonthDay&) const = default;

    YearMonth year_month() const { return {year, month}; }
    std::string str() const;  // "YYYY-MM-DD"
};

YearMonth parse_year_month(const std::string& s);        // "YYYY-MM"
YearMonthDay parse_year_month_day(const std::string& s); // "YYYY-MM-DD"
YearMonth parse_quarter(const std::string& s);           // "YYYY-Qn" -> last month of quarter
int parse_year(const std::string& s);                    // "YYYY"

/// Number of months in [a, b] inclusive; negative if b precedes a.
inline int months_between_inclusive(const YearMonth& a, const YearMonth& b) {
    return b.index() - a.index() + 1;
}

}  // namespace drix
