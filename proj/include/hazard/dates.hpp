#pragma once
#include <optional>
#include <string>
#include <string_view>

namespace hazard {

// Calendar date with day-serial arithmetic (proleptic Gregorian).
// Serial 0 = 1970-01-01; negative values are fine for 20th-century dates.
struct Date {
    int serial = 0;

    static Date from_ymd(int year, int month, int day);
    void to_ymd(int& year, int& month, int& day) const;

    friend auto operator<=>(const Date&, const Date&) = default;
    Date operator+(int days) const { return Date{serial + days}; }
    int operator-(const Date& o) const { return serial - o.serial; }
};

// Parses "M/D/YYYY" (also accepts zero-padded fields). Returns nullopt on
// malformed input or an impossible calendar day.
std::optional<Date> parse_date_mdy(std::string_view s);

// Serializes as M/D/YYYY without zero padding, mirroring the input format.
std::string format_date_mdy(Date d);

} // namespace hazard
