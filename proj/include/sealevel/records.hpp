#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sealevel/calendar.hpp"

namespace sealevel {

// Nominal semidiurnal cycle: 12 h 26 min.
constexpr std::int64_t kTidalCycleSeconds = 12 * 3600 + 26 * 60;
constexpr std::int64_t kCycleToleranceSeconds = 2 * 3600;

// One tidal cycle: its peak predicted tide, the associated skew surge and
// calendar covariates. A missing cycle keeps its peak tide but carries no
// usable surge.
struct TidalCycleRecord {
    std::int64_t timestamp = 0;  // epoch seconds, UTC
    double peak_tide = 0.0;      // metres above datum
    double skew_surge = 0.0;     // metres; meaningless when missing
    int year_index = 0;          // k, 1..K_obs
    int month = 0;               // j, 1..12
    int day_of_year = 0;         // d, 1..365
    int day_of_month = 0;        // d_j, 1..31
    bool missing = false;

    double sea_level() const { return peak_tide + skew_surge; }
};

// Covariates needed to evaluate the surge distribution for one cycle.
struct CovariateContext {
    int day_of_year = 1;         // d
    int day_of_month = 1;        // d_j
    double mean_day_of_month = 16.0;  // d-bar_j, from the calendar
    int month = 1;               // j
    double peak_tide = 0.0;      // x, metres
    double tide_mean = 0.0;      // site x-bar
    double tide_sd = 1.0;        // site s_x, > 0

    double standardized_tide() const { return (peak_tide - tide_mean) / tide_sd; }
    double day_offset() const {
        return static_cast<double>(day_of_month) - mean_day_of_month;
    }
};

CovariateContext make_context(const TidalCycleRecord& rec, double tide_mean, double tide_sd);

struct MonthlyThresholds {
    double u[12] = {};           // u_j, metres
    double quantile_level = 0.95;  // q_u
    int exceedance_count[12] = {};

    double threshold(int month) const { return u[month - 1]; }
};

// K yearly sequences of contiguous peak tides, month by month.
struct TidalSampleSet {
    struct MonthSample {
        std::vector<double> peak_tides;   // X_{j_i}^{(k)}
        std::vector<int> day_of_year;     // d per cycle
        std::vector<int> day_of_month;    // d_j per cycle
    };
    struct YearSample {
        int source_year = 0;              // calendar year the tides came from
        MonthSample months[12];
        std::size_t total_cycles() const {
            std::size_t n = 0;
            for (const auto& m : months) n += m.peak_tides.size();
            return n;
        }
    };
    std::vector<YearSample> years;  // size K

    std::size_t K() const { return years.size(); }
};

enum class SamplePolicy { contiguous_years, repeat_single_year };

// --- Operations -----------------------------------------------------------

// Parses `timestamp,peak_tide,skew_surge` CSV (header required). Rows with
// an empty surge field are marked missing. Throws std::runtime_error with a
// line number on malformed rows or non-monotone timestamps.
std::vector<TidalCycleRecord> parse_records(std::istream& in);
std::vector<TidalCycleRecord> parse_records_file(const std::string& path);

void write_records_csv(std::ostream& out, const std::vector<TidalCycleRecord>& records);

// Month-specific thresholds u_j as empirical q_u quantiles of each month's
// non-missing surges. Requires >= 20 surges per month.
MonthlyThresholds compute_thresholds(const std::vector<TidalCycleRecord>& records,
                                     double q_u = 0.95);

// Builds K yearly peak-tide samples. Missing peak tides spanning a single
// cycle are linearly interpolated; longer gaps invalidate the year.
TidalSampleSet build_tidal_samples(const std::vector<TidalCycleRecord>& records, std::size_t K,
                                   SamplePolicy policy = SamplePolicy::contiguous_years);

struct DetrendResult {
    std::vector<TidalCycleRecord> records;
    double slope_per_year = 0.0;
};

// Removes the least-squares linear trend in annual mean surge.
DetrendResult detrend_linear(const std::vector<TidalCycleRecord>& records);

struct RecenterResult {
    std::vector<TidalCycleRecord> records;
    std::vector<int> skipped_years;  // years with < min_count surges, left as-is
};

// Subtracts each year's mean surge. Years with fewer than min_count
// non-missing surges are skipped with a warning entry.
RecenterResult recenter_annual_means(const std::vector<TidalCycleRecord>& records,
                                     std::size_t min_count = 50);

// Site-wide peak tide mean and standard deviation over all records.
void tide_moments(const std::vector<TidalCycleRecord>& records, double& mean_out,
                  double& sd_out);

}  // namespace sealevel
