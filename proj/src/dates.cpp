#include "hazard/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace hazard {

// Days-from-civil / civil-from-days after Howard Hinnant's algorithms;
// exact over the full Gregorian range, no time-zone dependencies.
Date Date::from_ymd(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1; // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;           // [0, 146096]
    return Date{era * 146097 + static_cast<int>(doe) - 719468};
}

void Date::to_ymd(int& year, int& month, int& day) const {
    int z = serial + 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    year = y + (month <= 2);
}

namespace {
bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}
int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> len{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return len[m - 1];
}
} // namespace

std::optional<Date> parse_date_mdy(std::string_view s) {
    const auto p1 = s.find('/');
    if (p1 == std::string_view::npos) return std::nullopt;
    const auto p2 = s.find('/', p1 + 1);
    if (p2 == std::string_view::npos) return std::nullopt;
    int m = 0, d = 0, y = 0;
    if (!parse_int(s.substr(0, p1), m) || !parse_int(s.substr(p1 + 1, p2 - p1 - 1), d) ||
        !parse_int(s.substr(p2 + 1), y))
        return std::nullopt;
    if (y < 1000 || y > 9999 || m < 1 || m > 12 || d < 1 || d > days_in_month(y, m))
        return std::nullopt;
    return Date::from_ymd(y, m, d);
}

std::string format_date_mdy(Date dt) {
    int y, m, d;
    dt.to_ymd(y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d/%d/%d", m, d, y);
    return buf;
}

} // namespace hazard
