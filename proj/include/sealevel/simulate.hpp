#pragma once

#include <cstdint>
#include <vector>

#include "sealevel/records.hpp"
#include "sealevel/surge_model.hpp"

namespace sealevel {

// Synthetic tide-plus-surge generator with a known composite truth:
// harmonic peak tides, a truncated-Gaussian surge body below a fixed
// threshold and a covariate-dependent GPD tail above it. Optional
// max-autoregressive clustering induces an extremal index below 1.
struct SimTruth {
    struct TideComponent {
        double amplitude = 0.0;   // metres
        double period_days = 0.0;
        double phase_days = 0.0;
    };
    double tide_base = 5.0;                 // metres above datum
    std::vector<TideComponent> tide_components;

    double body_sd = 0.12;                  // surge body scale, metres
    double threshold = 0.0;                 // u0; <= 0 derives from q_u
    double q_u = 0.95;

    TailModelSpec tail_spec;                // S2 or S4 truth
    TailParams tail;
    RateVariant rate_variant = RateVariant::R0;
    RateParams rate;

    double cluster_alpha = 0.0;             // in [0,1); theta = 1 - alpha

    void validate() const;
    double resolved_threshold() const;

    // Marginal surge CDF / quantile at the given covariates.
    double cdf(double y, const CovariateContext& ctx) const;
    double quantile(double u, const CovariateContext& ctx) const;
};

// Default truth: Table-2-like seasonal S2 tail over a two-harmonic tide.
SimTruth default_sim_truth();

// One record per tidal cycle (12h26m cadence) starting at Jan 1 of
// start_year, for the requested number of calendar years.
std::vector<TidalCycleRecord> simulate_records(const SimTruth& truth, int years,
                                               std::uint64_t seed, int start_year = 1990);

}  // namespace sealevel
