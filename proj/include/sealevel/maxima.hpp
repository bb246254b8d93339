#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sealevel/exi.hpp"
#include "sealevel/records.hpp"
#include "sealevel/surge_model.hpp"

namespace sealevel {

// Model variants, in increasing order of structure:
//   current:             stationary surge, one pooled tidal year (geometric
//                        mean over yearly samples)
//   baseline:            stationary surge, averaged over yearly tidal samples
//   seasonal_surge:      seasonal surge model, averaged tidal samples
//   seasonal_tide:       stationary surge, month-aligned tidal samples
//   full_seasonal:       seasonal surge and month-aligned tides
//   interaction:         adds tide covariates to the surge model
//   temporal_dependence: adds the extremal-index exponent
enum class Variant {
    current,
    baseline,
    seasonal_surge,
    seasonal_tide,
    full_seasonal,
    interaction,
    temporal_dependence,
};

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct VariantSpec {
    Variant variant = Variant::full_seasonal;
    SurgeModel surge;
    TidalSampleSet tides;
    std::optional<ExiModel> exi;  // temporal_dependence only

    // Throws if the required sub-models for the variant are absent.
    void validate() const;

    bool uses_theta() const { return variant == Variant::temporal_dependence; }
    bool geometric_over_years() const { return variant == Variant::current; }
};

// P(M_j <= z): average over the K yearly tidal samples of the product of
// per-cycle surge CDF factors, each raised to theta-hat for the
// temporal-dependence variant. The current variant takes the geometric
// mean over years instead. Log-space accumulation throughout.
double monthly_max_cdf(const VariantSpec& spec, int month, double z);

// P(M <= z) over all twelve months.
double annual_max_cdf(const VariantSpec& spec, double z);

// Single-year annual CDF (k is 0-based into the sample set).
double year_specific_cdf(const VariantSpec& spec, std::size_t k, double z);

struct ReturnLevelPoint {
    double p = 0.0;        // annual (or monthly) exceedance probability
    double z = 0.0;        // metres
};

struct ReturnLevelCurve {
    Variant variant = Variant::full_seasonal;
    std::optional<int> month;       // absent for annual curves
    std::optional<std::size_t> year;  // set for year-specific curves
    std::vector<ReturnLevelPoint> points;
};

// Solves CDF(z) = 1 - p by bracketed bisection to 1e-4 m. month = nullopt
// solves on the annual CDF. Throws when p is too large for the discrete
// empirical body to resolve.
double return_level(const VariantSpec& spec, double p, std::optional<int> month = std::nullopt,
                    std::optional<std::size_t> year = std::nullopt);

ReturnLevelCurve return_level_curve(const VariantSpec& spec, const std::vector<double>& ps,
                                    std::optional<int> month = std::nullopt,
                                    std::optional<std::size_t> year = std::nullopt);

// Observed maxima with Weibull plotting positions: the i-th largest of n
// gets exceedance probability i/(n+1).
ReturnLevelCurve empirical_return_levels(std::vector<double> maxima);

// Sea-level maxima of each sufficiently covered calendar year (or of one
// month across years).
std::vector<double> extract_annual_maxima(const std::vector<TidalCycleRecord>& records,
                                          std::size_t min_cycles = 650);
std::vector<double> extract_monthly_maxima(const std::vector<TidalCycleRecord>& records,
                                           int month, std::size_t min_cycles = 40);

// P(annual maximum falls in month j | M = z), averaged over the yearly
// samples; requires the temporal-dependence variant structure (theta taken
// as 1 when no ExiModel is attached).
double month_occurrence_prob(const VariantSpec& spec, int month, double z);
std::array<double, 12> month_occurrence_profile(const VariantSpec& spec, double z);

}  // namespace sealevel
