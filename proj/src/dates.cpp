#include "drix/dates.hpp"

#include <charconv>
#include <cstdio>

#include "drix/errors.hpp"

namespace drix {

namespace {

int parse_int_strict(const std::string& s, size_t from, size_t len, const char* what) {
    if (from + len > s.size()) throw ValidationError(std::string("bad ") + what + " in date '" + s + "'");
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + from, s.data() + from + len, value);
    if (ec != std::errc() || ptr != s.data() + from + len)
        throw ValidationError(std::string("bad ") + what + " in date '" + s + "'");
    return value;
}

}  // namespace

YearMonth YearMonth::from_index(int idx) {
    int y = idx / 12;
    int m = idx % 12;
    if (m < 0) {
        m += 12;
        --y;
    }
    return {y, m + 1};
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

std::string YearMonthDay::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

YearMonth parse_year_month(const std::string& s) {
    if (s.size() != 7 || s[4] != '-')
        throw ValidationError("expected YYYY-MM date, got '" + s + "'");
    YearMonth ym{parse_int_strict(s, 0, 4, "year"), parse_int_strict(s, 5, 2, "month")};
    if (ym.month < 1 || ym.month > 12)
        throw ValidationError("month out of range in '" + s + "'");
    return ym;
}

YearMonthDay parse_year_month_day(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw ValidationError("expected YYYY-MM-DD date, got '" + s + "'");
    YearMonthDay d{parse_int_strict(s, 0, 4, "year"), parse_int_strict(s, 5, 2, "month"),
                   parse_int_strict(s, 8, 2, "day")};
    if (d.month < 1 || d.month > 12) throw ValidationError("month out of range in '" + s + "'");
    if (d.day < 1 || d.day > 31) throw ValidationError("day out of range in '" + s + "'");
    return d;
}

YearMonth parse_quarter(const std::string& s) {
    if (s.size() != 7 || s[4] != '-' || (s[5] != 'Q' && s[5] != 'q'))
        throw ValidationError("expected YYYY-Qn date, got '" + s + "'");
    int year = parse_int_strict(s, 0, 4, "year");
    int q = parse_int_strict(s, 6, 1, "quarter");
    if (q < 1 || q > 4) throw ValidationError("quarter out of range in '" + s + "'");
    return {year, q * 3};
}

int parse_year(const std::string& s) {
    if (s.size() != 4) throw ValidationError("expected YYYY date, got '" + s + "'");
    return parse_int_strict(s, 0, 4, "year");
}

}  // namespace drix
