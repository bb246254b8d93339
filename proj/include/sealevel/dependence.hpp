#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sealevel/records.hpp"

namespace sealevel {

// Tide-surge dependence diagnostics and temporal extremal dependence
// measures for a skew-surge series.

struct UniformityResult {
    double statistic = 0.0;   // KS distance of extreme-surge tide ranks from U(0,1)
    double p_raw = 1.0;       // treating tides as temporally independent
    double p_bootstrap = 1.0; // mean p over stationary-bootstrap resamples
    std::size_t n_extreme = 0;
};

// KS uniformity of the peak-tide ranks attached to extreme surges
// (above the q quantile). The bootstrap resamples the (tide, surge) pair
// series with geometric blocks of the given mean to respect tidal
// autocorrelation.
UniformityResult ranked_tide_uniformity(const std::vector<TidalCycleRecord>& records,
                                        double q = 0.95, std::size_t expected_block = 10,
                                        std::size_t n_boot = 100, std::uint64_t seed = 0);

struct AdResult {
    double statistic = 0.0;  // standardized k-sample statistic
    double p_value = 1.0;
};

// Anderson-Darling two-sample comparison of all peak tides against the
// tides attached to extreme surges; the monthly variant restricts both
// samples to one calendar month.
AdResult extreme_tide_ad(const std::vector<TidalCycleRecord>& records, double q = 0.95);
std::array<AdResult, 12> extreme_tide_ad_monthly(const std::vector<TidalCycleRecord>& records,
                                                 double q = 0.95);

struct BlockTrendResult {
    double slope = 0.0;    // metres of surge quantile per block index
    double p_value = 1.0;  // two-sided t-test on the slope
    std::vector<double> block_quantiles;
};

// Surge upper quantile across ordered-tide blocks; a trend indicates the
// surge distribution shifts with tide level. A final partial block shorter
// than half block_size is dropped.
BlockTrendResult quantile_block_trend(const std::vector<TidalCycleRecord>& records,
                                      std::size_t block_size = 100, double q = 0.95);

struct ChiResult {
    double chi = 0.0;      // conditional exceedance probability, [0,1]
    double chibar = 0.0;   // log-ratio measure, (-1,1]
    bool no_joint_exceedances = false;
};

// Pairwise extremal dependence of the surge series at lag tau, both
// evaluated at the q quantile.
ChiResult chi_chibar(const std::vector<double>& surges, std::size_t tau, double q);

struct DependenceReport {
    UniformityResult uniformity;
    AdResult ad_all;
    std::array<AdResult, 12> ad_monthly;
    BlockTrendResult block_trend;
    struct ChiRow {
        std::size_t tau = 1;
        double q = 0.95;
        ChiResult est;
    };
    std::vector<ChiRow> chi;
};

DependenceReport dependence_report(const std::vector<TidalCycleRecord>& records, double q,
                                   std::size_t expected_block, std::size_t n_boot,
                                   std::uint64_t seed);

}  // namespace sealevel
