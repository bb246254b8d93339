#include "sealevel/calendar.hpp"

#include <cstdio>
#include <stdexcept>

namespace sealevel {

bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int year, int month) {
    static const int lens[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lens[month - 1];
}

double mean_day_of_month(int month) {
    static const int lens[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return (lens[month - 1] + 1) / 2.0;
}

namespace {

// Civil-date conversions after Howard Hinnant's public-domain algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

std::int64_t civil_to_epoch(int y, int m, int d, int hh, int mm, int ss) {
    return days_from_civil(y, m, d) * 86400 + hh * 3600 + mm * 60 + ss;
}

CalendarInfo epoch_to_calendar(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    if (epoch_seconds < 0 && epoch_seconds % 86400 != 0) --days;
    CalendarInfo c;
    civil_from_days(days, c.year, c.month, c.day_of_month);
    int doy = c.day_of_month;
    for (int m = 1; m < c.month; ++m) doy += days_in_month(c.year, m);
    if (is_leap_year(c.year)) {
        // Feb 29 duplicates Feb 28 on the 365-day scale; later days shift.
        if (doy >= 60) --doy;
    }
    c.day_of_year = doy;
    return c;
}

std::int64_t parse_iso8601(const std::string& s) {
    int y, mo, d, hh, mi;
    int ss = 0;
    int n = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d%n", &y, &mo, &d, &hh, &mi, &ss, &n) == 6 ||
        (ss = 0, std::sscanf(s.c_str(), "%d-%d-%dT%d:%d%n", &y, &mo, &d, &hh, &mi, &n) == 5)) {
        std::string tail = s.substr(n);
        if (tail != "Z" && tail != "+00:00" && !tail.empty())
            throw std::invalid_argument("unsupported timezone suffix in timestamp: " + s);
        if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) ||
            hh < 0 || hh > 23 || mi < 0 || mi > 59 || ss < 0 || ss > 60)
            throw std::invalid_argument("out-of-range timestamp: " + s);
        return civil_to_epoch(y, mo, d, hh, mi, ss);
    }
    throw std::invalid_argument("malformed ISO-8601 timestamp: " + s);
}

std::string format_iso8601(std::int64_t t) {
    CalendarInfo c = epoch_to_calendar(t);
    std::int64_t sod = t - (t / 86400) * 86400;
    if (sod < 0) sod += 86400;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month,
                  c.day_of_month, static_cast<int>(sod / 3600),
                  static_cast<int>((sod / 60) % 60), static_cast<int>(sod % 60));
    return buf;
}

}  // namespace sealevel
