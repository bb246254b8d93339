#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sealevel/exi.hpp"
#include "sealevel/maxima.hpp"
#include "sealevel/records.hpp"
#include "sealevel/surge_model.hpp"

namespace sealevel {

// Full fit of the surge pipeline: thresholds, body, tail, rate and the
// optional extremal-index model, from one configuration.
struct PipelineConfig {
    SurgeFitOptions surge;
    bool fit_exi = true;
    std::size_t run_length = 2;  // r
    double v_quantile = 0.99;    // exi threshold level
    ExiGridSpec grid;
};

struct PipelineFit {
    SurgeFitResult surge;
    std::optional<ExiModel> exi;
};

PipelineFit fit_pipeline(const std::vector<TidalCycleRecord>& records,
                         const PipelineConfig& cfg);

// Probability integral transform of the surges through a fitted model,
// with uniformity checks overall and per year.
struct PitSeries {
    std::vector<double> u;       // F(Y_i; ctx_i) per non-missing cycle, in order
    double ks_statistic = 0.0;
    double ks_p = 1.0;
    struct YearP {
        int year = 0;
        double p = 1.0;
        std::size_t n = 0;
    };
    std::vector<YearP> yearly;
};

PitSeries pit_transform(const SurgeModel& model, const std::vector<TidalCycleRecord>& records);

struct BootstrapConfig {
    std::size_t n_reps = 200;
    double mean_block = 10.0;   // cycles; Geometric(1/mean_block) block lengths
    std::uint64_t seed = 0;
    std::size_t workers = 0;    // 0 = hardware concurrency
};

struct BootstrapResult {
    struct Interval {
        double p = 0.0;
        double z_hat = 0.0;  // original-fit point estimate
        double lo95 = 0.0;
        double hi95 = 0.0;
    };
    std::vector<Interval> intervals;
    std::vector<double> xi_reps;  // replicate shape estimates
    std::size_t failures = 0;
    std::size_t n_reps = 0;
};

// Stationary-bootstrap confidence intervals on return levels: resample the
// PIT series in blocks, invert through the original model at the original
// covariates, refit the full pipeline, re-derive the curves. Replicates
// whose refit fails are dropped; more than 20% failures is an error.
BootstrapResult bootstrap_return_levels(const std::vector<TidalCycleRecord>& records,
                                        const PipelineConfig& pipeline,
                                        const PipelineFit& original,
                                        const TidalSampleSet& tides, Variant variant,
                                        const std::vector<double>& ps,
                                        const BootstrapConfig& cfg);

// PP plot of observed annual maxima against the model's annual CDF, with
// order-statistic (Beta) 95% tolerance bounds. In year_specific mode the
// i-th maximum is transformed through the i-th yearly sample's CDF.
struct PpPlotData {
    struct Point {
        double empirical = 0.0;  // i/(n+1)
        double model = 0.0;      // sorted transformed maxima
        double lo95 = 0.0;
        double hi95 = 0.0;
    };
    std::vector<Point> points;
};

PpPlotData pp_plot_data(const std::vector<double>& annual_maxima, const VariantSpec& spec,
                        bool year_specific);

}  // namespace sealevel
