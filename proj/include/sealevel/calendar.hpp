#pragma once

#include <cstdint>
#include <string>

namespace sealevel {

// Calendar covariates attached to every tidal cycle. Day-of-year uses a
// fixed 365-day scale: in leap years Feb 29 shares d with Feb 28 and all
// later days shift down by one, so the harmonic period f = 365 is exact.
struct CalendarInfo {
    int year = 0;       // calendar year
    int month = 0;      // 1..12
    int day_of_month = 0;   // 1..31
    int day_of_year = 0;    // 1..365
};

constexpr double kPeriodicityDays = 365.0;

bool is_leap_year(int y);
int days_in_month(int year, int month);

// Mean day-of-month for month j on the 365-day calendar (Feb uses 28 days).
double mean_day_of_month(int month);

// Seconds since 1970-01-01T00:00:00Z.
std::int64_t civil_to_epoch(int y, int m, int d, int hh, int mm, int ss);

CalendarInfo epoch_to_calendar(std::int64_t epoch_seconds);

// Parses ISO-8601 UTC instants: YYYY-MM-DDTHH:MM[:SS]Z (also accepts a
// trailing "+00:00"). Throws std::invalid_argument on malformed input.
std::int64_t parse_iso8601(const std::string& s);

std::string format_iso8601(std::int64_t epoch_seconds);

}  // namespace sealevel
