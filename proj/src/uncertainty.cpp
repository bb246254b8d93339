#include "sealevel/uncertainty.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "sealevel/resample.hpp"
#include "sealevel/stats.hpp"

namespace sealevel {

PipelineFit fit_pipeline(const std::vector<TidalCycleRecord>& records,
                         const PipelineConfig& cfg) {
    PipelineFit out;
    out.surge = fit_surge_model(records, cfg.surge);
    if (cfg.fit_exi) {
        std::vector<double> surges;
        for (const auto& r : records)
            if (!r.missing) surges.push_back(r.skew_surge);
        std::vector<double> sorted = surges;
        std::sort(sorted.begin(), sorted.end());
        const double v = stats::quantile_sorted(sorted, cfg.v_quantile);
        out.exi = fit_exi_model(surges, cfg.run_length, v, cfg.grid, cfg.surge.seed);
    }
    return out;
}

PitSeries pit_transform(const SurgeModel& model, const std::vector<TidalCycleRecord>& records) {
    PitSeries out;
    std::map<int, std::vector<double>> per_year;
    for (const auto& r : records) {
        if (r.missing) continue;
        const double u = model.cdf(r.skew_surge, make_context(r, model.tide_mean, model.tide_sd));
        out.u.push_back(u);
        per_year[epoch_to_calendar(r.timestamp).year].push_back(u);
    }
    if (out.u.empty()) throw std::runtime_error("pit_transform: no usable records");
    const auto ks = stats::ks_test_uniform(out.u);
    out.ks_statistic = ks.statistic;
    out.ks_p = ks.p_value;
    for (const auto& [year, us] : per_year) {
        PitSeries::YearP yp;
        yp.year = year;
        yp.n = us.size();
        yp.p = us.size() >= 5 ? stats::ks_test_uniform(us).p_value : 1.0;
        out.yearly.push_back(yp);
    }
    return out;
}

namespace {

// replicate records: PIT series resampled in blocks, inverted through the
// original model at the original covariates
std::vector<TidalCycleRecord> bootstrap_records(const std::vector<TidalCycleRecord>& records,
                                                const SurgeModel& model,
                                                const std::vector<double>& u,
                                                double mean_block, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto idx = stationary_bootstrap_indices(u.size(), mean_block, rng);
    std::vector<TidalCycleRecord> out = records;
    std::size_t pos = 0;
    for (auto& r : out) {
        if (r.missing) continue;
        const double ub = u[idx[pos]];
        r.skew_surge = model.quantile(ub, make_context(r, model.tide_mean, model.tide_sd));
        ++pos;
    }
    return out;
}

struct ReplicateOutcome {
    bool ok = false;
    std::vector<double> z;  // per requested p
    double xi = 0.0;
};

}  // namespace

BootstrapResult bootstrap_return_levels(const std::vector<TidalCycleRecord>& records,
                                        const PipelineConfig& pipeline,
                                        const PipelineFit& original,
                                        const TidalSampleSet& tides, Variant variant,
                                        const std::vector<double>& ps,
                                        const BootstrapConfig& cfg) {
    if (cfg.n_reps < 2) throw std::invalid_argument("bootstrap needs n_reps >= 2");
    if (!(cfg.mean_block >= 1.0)) throw std::invalid_argument("mean block length must be >= 1");

    const SurgeModel& model = original.surge.model;
    const auto pit = pit_transform(model, records);

    VariantSpec base;
    base.variant = variant;
    base.surge = model;
    base.tides = tides;
    base.exi = original.exi;
    base.validate();

    // pinned exi settings for every replicate refit
    const double v_fixed = original.exi ? original.exi->v : 0.0;

    auto run_replicate = [&](std::size_t rep) {
        ReplicateOutcome out;
        try {
            const std::uint64_t rep_seed = cfg.seed ^ static_cast<std::uint64_t>(rep + 1);
            auto rec_b = bootstrap_records(records, model, pit.u, cfg.mean_block, rep_seed);
            PipelineConfig pc = pipeline;
            pc.surge.seed = rep_seed;
            PipelineFit fit_b;
            fit_b.surge = fit_surge_model(rec_b, pc.surge);
            if (pc.fit_exi) {
                std::vector<double> surges;
                for (const auto& r : rec_b)
                    if (!r.missing) surges.push_back(r.skew_surge);
                fit_b.exi =
                    fit_exi_model(surges, pc.run_length, v_fixed, pc.grid, rep_seed);
            }
            VariantSpec spec = base;
            spec.surge = fit_b.surge.model;
            spec.exi = fit_b.exi;
            for (double p : ps) out.z.push_back(return_level(spec, p));
            out.xi = fit_b.surge.model.tail.xi;
            out.ok = true;
        } catch (const std::exception&) {
            out.ok = false;
        }
        return out;
    };

    const std::size_t workers =
        cfg.workers > 0 ? cfg.workers
                        : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::vector<ReplicateOutcome> outcomes(cfg.n_reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t rep = next.fetch_add(1);
            if (rep >= cfg.n_reps) return;
            outcomes[rep] = run_replicate(rep);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w + 1 < workers && w + 1 < cfg.n_reps; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    BootstrapResult res;
    res.n_reps = cfg.n_reps;
    std::vector<std::vector<double>> z_by_p(ps.size());
    for (const auto& o : outcomes) {
        if (!o.ok) {
            ++res.failures;
            continue;
        }
        for (std::size_t i = 0; i < ps.size(); ++i) z_by_p[i].push_back(o.z[i]);
        res.xi_reps.push_back(o.xi);
    }
    if (res.failures * 5 > cfg.n_reps)
        throw std::runtime_error("bootstrap: more than 20% of replicate fits failed (" +
                                 std::to_string(res.failures) + "/" +
                                 std::to_string(cfg.n_reps) + ")");

    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::sort(z_by_p[i].begin(), z_by_p[i].end());
        BootstrapResult::Interval iv;
        iv.p = ps[i];
        iv.z_hat = return_level(base, ps[i]);
        iv.lo95 = stats::quantile_sorted(z_by_p[i], 0.025);
        iv.hi95 = stats::quantile_sorted(z_by_p[i], 0.975);
        res.intervals.push_back(iv);
    }
    return res;
}

namespace {

// Beta(a, b) quantile by bisection on the regularized incomplete beta.
double beta_quantile(double a, double b, double q) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (stats::incbeta(a, b, mid) < q)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PpPlotData pp_plot_data(const std::vector<double>& annual_maxima, const VariantSpec& spec,
                        bool year_specific) {
    const std::size_t n = annual_maxima.size();
    if (n < 5) throw std::invalid_argument("pp_plot_data: need at least 5 maxima");
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (year_specific) {
            const std::size_t k = i % spec.tides.K();
            u[i] = year_specific_cdf(spec, k, annual_maxima[i]);
        } else {
            u[i] = annual_max_cdf(spec, annual_maxima[i]);
        }
    }
    std::sort(u.begin(), u.end());
    PpPlotData out;
    for (std::size_t i = 0; i < n; ++i) {
        PpPlotData::Point pt;
        pt.empirical = static_cast<double>(i + 1) / static_cast<double>(n + 1);
        pt.model = u[i];
        const double a = static_cast<double>(i + 1);
        const double b = static_cast<double>(n - i);
        pt.lo95 = beta_quantile(a, b, 0.025);
        pt.hi95 = beta_quantile(a, b, 0.975);
        out.points.push_back(pt);
    }
    return out;
}

}  // namespace sealevel
