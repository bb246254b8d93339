#include "sealevel/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sealevel/resample.hpp"
#include "sealevel/stats.hpp"

namespace sealevel {

namespace {

// fractional ranks of x within the full sample: rank/(n+1) in (0,1)
std::vector<double> fractional_ranks(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> ord(n);
    for (std::size_t i = 0; i < n; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i)
        r[ord[i]] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    return r;
}

double uniformity_p(const std::vector<double>& tides, const std::vector<double>& surges,
                    double threshold) {
    const auto ranks = fractional_ranks(tides);
    std::vector<double> u;
    for (std::size_t i = 0; i < surges.size(); ++i)
        if (surges[i] > threshold) u.push_back(ranks[i]);
    if (u.size() < 2) return 1.0;
    return stats::ks_test_uniform(u).p_value;
}

}  // namespace

UniformityResult ranked_tide_uniformity(const std::vector<TidalCycleRecord>& records, double q,
                                        std::size_t expected_block, std::size_t n_boot,
                                        std::uint64_t seed) {
    if (n_boot < 1) throw std::invalid_argument("ranked_tide_uniformity: n_boot must be >= 1");
    std::vector<double> tides, surges;
    for (const auto& r : records) {
        if (r.missing) continue;
        tides.push_back(r.peak_tide);
        surges.push_back(r.skew_surge);
    }
    if (surges.size() < 40) throw std::runtime_error("ranked_tide_uniformity: too few records");
    std::vector<double> sorted = surges;
    std::sort(sorted.begin(), sorted.end());
    const double threshold = stats::quantile_sorted(sorted, q);

    UniformityResult out;
    {
        const auto ranks = fractional_ranks(tides);
        std::vector<double> u;
        for (std::size_t i = 0; i < surges.size(); ++i)
            if (surges[i] > threshold) u.push_back(ranks[i]);
        out.n_extreme = u.size();
        if (u.size() < 20)
            throw std::runtime_error("ranked_tide_uniformity: fewer than 20 extreme surges");
        const auto ks = stats::ks_test_uniform(u);
        out.statistic = ks.statistic;
        out.p_raw = ks.p_value;
    }

    double psum = 0.0;
    const std::size_t n = tides.size();
    for (std::size_t b = 0; b < n_boot; ++b) {
        std::mt19937_64 rng(seed + b);
        const auto idx =
            stationary_bootstrap_indices(n, static_cast<double>(expected_block), rng);
        std::vector<double> bt(n), bs(n);
        for (std::size_t i = 0; i < n; ++i) {
            bt[i] = tides[idx[i]];
            bs[i] = surges[idx[i]];
        }
        psum += uniformity_p(bt, bs, threshold);
    }
    out.p_bootstrap = psum / static_cast<double>(n_boot);
    return out;
}

AdResult extreme_tide_ad(const std::vector<TidalCycleRecord>& records, double q) {
    std::vector<double> tides, surges;
    for (const auto& r : records) {
        if (r.missing) continue;
        tides.push_back(r.peak_tide);
        surges.push_back(r.skew_surge);
    }
    std::vector<double> sorted = surges;
    std::sort(sorted.begin(), sorted.end());
    const double threshold = stats::quantile_sorted(sorted, q);
    std::vector<double> extreme_tides;
    for (std::size_t i = 0; i < surges.size(); ++i)
        if (surges[i] > threshold) extreme_tides.push_back(tides[i]);
    const auto ad = stats::ad_two_sample(tides, extreme_tides);
    return {ad.statistic, ad.p_value};
}

std::array<AdResult, 12> extreme_tide_ad_monthly(const std::vector<TidalCycleRecord>& records,
                                                 double q) {
    std::array<AdResult, 12> out;
    for (int j = 1; j <= 12; ++j) {
        std::vector<TidalCycleRecord> month;
        for (const auto& r : records)
            if (!r.missing && r.month == j) month.push_back(r);
        out[j - 1] = extreme_tide_ad(month, q);
    }
    return out;
}

BlockTrendResult quantile_block_trend(const std::vector<TidalCycleRecord>& records,
                                      std::size_t block_size, double q) {
    std::vector<std::pair<double, double>> pairs;  // (tide, surge)
    for (const auto& r : records)
        if (!r.missing) pairs.emplace_back(r.peak_tide, r.skew_surge);
    std::sort(pairs.begin(), pairs.end());
    BlockTrendResult out;
    for (std::size_t begin = 0; begin < pairs.size(); begin += block_size) {
        const std::size_t end = std::min(begin + block_size, pairs.size());
        if (end - begin < block_size / 2) break;  // drop a short terminal block
        std::vector<double> s;
        s.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) s.push_back(pairs[i].second);
        std::sort(s.begin(), s.end());
        out.block_quantiles.push_back(stats::quantile_sorted(s, q));
    }
    if (out.block_quantiles.size() < 5)
        throw std::runtime_error("quantile_block_trend: fewer than 5 tide blocks");
    std::vector<double> xs(out.block_quantiles.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i + 1);
    const auto fit = stats::ols_line(xs, out.block_quantiles);
    out.slope = fit.slope;
    out.p_value = fit.p_value;
    return out;
}

ChiResult chi_chibar(const std::vector<double>& surges, std::size_t tau, double q) {
    if (surges.size() <= tau + 50)
        throw std::invalid_argument("chi_chibar: series too short for the requested lag");
    std::vector<double> sorted = surges;
    std::sort(sorted.begin(), sorted.end());
    const double y = stats::quantile_sorted(sorted, q);
    const std::size_t m = surges.size() - tau;
    std::size_t n_marg = 0, n_joint = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const bool a = surges[i] > y;
        const bool b = surges[i + tau] > y;
        if (a) ++n_marg;
        if (a && b) ++n_joint;
    }
    ChiResult out;
    if (n_marg == 0 || n_joint == 0) {
        out.chi = 0.0;
        out.chibar = -1.0 + 1e-12;
        out.no_joint_exceedances = true;
        return out;
    }
    out.chi = static_cast<double>(n_joint) / static_cast<double>(n_marg);
    const double p_marg = static_cast<double>(n_marg) / static_cast<double>(m);
    const double p_joint = static_cast<double>(n_joint) / static_cast<double>(m);
    out.chibar = 2.0 * std::log(p_marg) / std::log(p_joint) - 1.0;
    out.chibar = std::clamp(out.chibar, -1.0 + 1e-12, 1.0);
    return out;
}

DependenceReport dependence_report(const std::vector<TidalCycleRecord>& records, double q,
                                   std::size_t expected_block, std::size_t n_boot,
                                   std::uint64_t seed) {
    DependenceReport rep;
    rep.uniformity = ranked_tide_uniformity(records, q, expected_block, n_boot, seed);
    rep.ad_all = extreme_tide_ad(records, q);
    rep.ad_monthly = extreme_tide_ad_monthly(records, q);
    rep.block_trend = quantile_block_trend(records, 100, q);
    std::vector<double> surges;
    for (const auto& r : records)
        if (!r.missing) surges.push_back(r.skew_surge);
    for (std::size_t tau : {1u, 2u, 5u, 10u})
        for (double level : {0.9, 0.95, 0.99})
            rep.chi.push_back({tau, level, chi_chibar(surges, tau, level)});
    return rep;
}

}  // namespace sealevel
