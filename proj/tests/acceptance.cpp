// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Simulation-recovery and oracle-equivalence checks; the real-data
// fixture criterion is skipped when no gauge CSVs are supplied.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sealevel/dependence.hpp"
#include "sealevel/exi.hpp"
#include "sealevel/maxima.hpp"
#include "sealevel/optim.hpp"
#include "sealevel/records.hpp"
#include "sealevel/resample.hpp"
#include "sealevel/simulate.hpp"
#include "sealevel/stats.hpp"
#include "sealevel/surge_model.hpp"
#include "sealevel/uncertainty.hpp"

using namespace sealevel;

namespace {

int g_failures = 0;

void report(int n, bool pass, const std::string& detail) {
    std::cout << "ACCEPTANCE " << n << ": " << (pass ? "PASS" : "FAIL");
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

void report_skip(int n, const std::string& why) {
    std::cout << "ACCEPTANCE " << n << ": SKIP  (" << why << ")" << std::endl;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            f(i);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

CovariateContext plain_ctx(int day_of_year, int month) {
    CovariateContext c;
    c.day_of_year = day_of_year;
    c.day_of_month = 15;
    c.mean_day_of_month = mean_day_of_month(month);
    c.month = month;
    c.peak_tide = 5.0;
    c.tide_mean = 5.0;
    c.tide_sd = 1.0;
    return c;
}

double wrap_days(double d) {
    double w = std::fmod(d, 365.0);
    if (w > 182.5) w -= 365.0;
    if (w < -182.5) w += 365.0;
    return w;
}

bool covers(const ParamEstimate& e, double truth, bool periodic = false) {
    if (std::isnan(e.lo95) || std::isnan(e.hi95)) return false;
    if (!periodic) return truth >= e.lo95 && truth <= e.hi95;
    const double off = wrap_days(truth - e.value);
    return off >= e.lo95 - e.value && off <= e.hi95 - e.value;
}

const ParamEstimate& by_name(const std::vector<ParamEstimate>& es, const std::string& name) {
    for (const auto& e : es)
        if (e.name == name) return e;
    throw std::runtime_error("no estimate named " + name);
}

// ---------------------------------------------------------------------------
// 1. GPD likelihood: exponential limit and analytic-gradient agreement.

void criterion_1() {
    const TailModelSpec spec{TailVariant::S2};

    std::mt19937_64 rng(1);
    std::exponential_distribution<double> ed(1.0);
    std::vector<Exceedance> expdata;
    double sum = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double y = ed(rng);
        sum += y;
        expdata.push_back({y, plain_ctx(1 + (i * 11) % 365, 1 + i % 12)});
    }
    TailParams limit;
    limit.alpha_sigma = 1.0;
    limit.xi = 1e-12;
    const double nll_err = std::fabs(nll_tail(limit, spec, expdata) - sum);

    // analytic gradient of the seasonal-scale GPD NLL, derived from
    // d/dsigma = 1/sigma - (1+xi) y / (sigma^2 t) and
    // d/dxi    = -log(t)/xi^2 + (1/xi+1) (y/sigma) / t, t = 1 + xi y / sigma
    const double omega = 2.0 * M_PI / 365.0;
    // excesses capped well inside every sampled parameter's support so the
    // finite-difference probes never cross the upper endpoint at negative shape
    std::exponential_distribution<double> small(1.0 / 0.02);
    std::vector<Exceedance> data;
    for (int i = 0; i < 200; ++i)
        data.push_back({std::min(small(rng), 0.1), plain_ctx(1 + (i * 7) % 365, 1)});
    auto nll_vec = [&](const std::vector<double>& x) {
        TailParams p;
        p.alpha_sigma = x[0];
        p.beta_sigma = x[1];
        p.phi_sigma = x[2];
        p.xi = x[3];
        return nll_tail(p, spec, data);
    };
    std::uniform_real_distribution<double> ua(0.1, 0.3), ub(0.0, 0.5), uphi(0.0, 365.0);
    std::uniform_real_distribution<double> uxi(0.05, 0.2);
    std::uniform_int_distribution<int> sign(0, 1);
    double worst = 0.0;
    for (int pt = 0; pt < 20; ++pt) {
        const double alpha = ua(rng);
        const double beta = ub(rng) * alpha;
        const double phi = uphi(rng);
        const double xi = (sign(rng) ? 1.0 : -1.0) * uxi(rng);
        const std::vector<double> x = {alpha, beta, phi, xi};
        if (!std::isfinite(nll_vec(x))) {
            --pt;  // outside the support at negative shape; redraw
            continue;
        }
        std::vector<double> an(4, 0.0);
        for (const auto& e : data) {
            const double s = std::sin(omega * (e.ctx.day_of_year - phi));
            const double c = std::cos(omega * (e.ctx.day_of_year - phi));
            const double sigma = alpha + beta * s;
            const double t = 1.0 + xi * e.excess / sigma;
            const double dsig = 1.0 / sigma - (1.0 + xi) * e.excess / (sigma * sigma * t);
            an[0] += dsig;
            an[1] += dsig * s;
            an[2] += dsig * (-beta * omega * c);
            an[3] += -std::log(t) / (xi * xi) + (1.0 / xi + 1.0) * (e.excess / sigma) / t;
        }
        const auto fd = optim::fd_gradient(nll_vec, x, 1e-6);
        for (int i = 0; i < 4; ++i)
            worst = std::max(worst,
                             std::fabs(fd[i] - an[i]) / std::max(1.0, std::fabs(an[i])));
    }

    std::ostringstream d;
    d << "exp-limit err " << nll_err << ", max grad rel err " << worst;
    report(1, nll_err < 1e-9 && worst < 1e-5, d.str());
}

// ---------------------------------------------------------------------------
// 2. Seasonal-scale recovery: Hessian CI coverage over 100 replicates.

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto truth = default_sim_truth();
    const int reps = 100;
    std::array<std::atomic<int>, 4> hits{};
    parallel_for(reps, [&](std::size_t i) {
        auto recs = simulate_records(truth, 50, 1000 + i);
        // excesses over the known generator threshold: the GPD is exactly
        // well-specified, so Hessian CIs should attain nominal coverage
        const double u0 = truth.resolved_threshold();
        double m, s;
        tide_moments(recs, m, s);
        std::vector<Exceedance> data;
        for (const auto& rec : recs)
            if (!rec.missing && rec.skew_surge > u0)
                data.push_back({rec.skew_surge - u0, make_context(rec, m, s)});
        auto fit = fit_tail(TailModelSpec{TailVariant::S2}, data, std::nullopt, i);
        if (covers(by_name(fit.estimates, "alpha_sigma"), truth.tail.alpha_sigma)) ++hits[0];
        if (covers(by_name(fit.estimates, "beta_sigma"), truth.tail.beta_sigma)) ++hits[1];
        if (covers(by_name(fit.estimates, "phi_sigma"), truth.tail.phi_sigma, true)) ++hits[2];
        if (covers(by_name(fit.estimates, "xi"), truth.tail.xi)) ++hits[3];
    });
    std::ostringstream d;
    d << "coverage alpha " << hits[0] << " beta " << hits[1] << " phi " << hits[2] << " xi "
      << hits[3] << "/100, " << elapsed_s(t0) << " s";
    bool ok = elapsed_s(t0) < 600.0;
    for (const auto& h : hits) ok = ok && h >= 88;
    report(2, ok, d.str());
}

// ---------------------------------------------------------------------------
// 3. Model selection: BIC prefers the 4-parameter seasonal scale over the
//    24-parameter per-month model on seasonal-harmonic truth.

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto truth = default_sim_truth();
    const int reps = 100;
    std::atomic<int> s2_wins{0};
    std::atomic<long> n_total{0};
    parallel_for(reps, [&](std::size_t i) {
        auto recs = simulate_records(truth, 26, 3000 + i);  // ~900 exceedances
        auto th = compute_thresholds(recs, 0.95);
        double m, s;
        tide_moments(recs, m, s);
        auto data = extract_exceedances(recs, th, m, s);
        n_total += static_cast<long>(data.size());
        auto f2 = fit_tail(TailModelSpec{TailVariant::S2}, data, std::nullopt, i);
        auto f0 = fit_tail(TailModelSpec{TailVariant::S0}, data, std::nullopt, i);
        if (f2.bic < f0.bic) ++s2_wins;
    });
    std::ostringstream d;
    d << "S2 preferred " << s2_wins << "/100, mean n_exceed " << n_total / reps << ", "
      << elapsed_s(t0) << " s";
    report(3, s2_wins >= 95 && elapsed_s(t0) < 900.0, d.str());
}

// ---------------------------------------------------------------------------
// 4. Tide-dependent rate recovery: CI coverage of the tide coefficient.

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    auto truth = default_sim_truth();
    truth.rate_variant = RateVariant::R1;
    truth.rate.alpha_lambda_x = -0.32;
    truth.rate.beta_lambda_x = 0.10;
    truth.rate.phi_lambda_x = 100.0;
    const int reps = 100;
    std::atomic<int> hits{0};
    parallel_for(reps, [&](std::size_t i) {
        auto recs = simulate_records(truth, 20, 5000 + i);
        // exceedance indicators over the generator threshold, so the
        // Bernoulli GLM matches the data-generating process exactly
        const double u0 = truth.resolved_threshold();
        double m, s;
        tide_moments(recs, m, s);
        std::vector<RateObs> obs;
        for (const auto& rec : recs)
            if (!rec.missing) obs.push_back({rec.skew_surge > u0, make_context(rec, m, s)});
        auto fit = fit_rate(RateVariant::R1, obs, 0.05, i);
        if (covers(by_name(fit.estimates, "alpha_lambda_x"), -0.32)) ++hits;
    });
    std::ostringstream d;
    d << "coverage " << hits << "/100, " << elapsed_s(t0) << " s";
    report(4, hits >= 88, d.str());
}

// ---------------------------------------------------------------------------
// 5. Maxima distribution against a Monte Carlo oracle on a 60-cycle toy year.

SurgeModel toy_stationary_model(std::uint64_t seed) {
    SurgeModel m;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> body(0.0, 0.05);
    std::vector<double> atoms;
    while (atoms.size() < 500) {
        const double y = body(rng);
        if (y <= 0.12) atoms.push_back(y);
    }
    std::sort(atoms.begin(), atoms.end());
    for (int j = 0; j < 12; ++j) {
        m.thresholds.u[j] = 0.12;
        EmpiricalBody::Month mo;
        EmpiricalBody::Band b;
        b.sorted = atoms;
        b.kde_bandwidth = stats::silverman_bandwidth(atoms);
        b.kde_mass = 1.0;
        mo.bands.push_back(b);
        m.body.months[static_cast<std::size_t>(j)] = mo;
    }
    m.tail_spec.variant = TailVariant::S2;
    m.tail.alpha_sigma = 0.08;
    m.tail.xi = 0.0;  // exponential tail
    m.rate_variant = RateVariant::R0;
    m.rate.lambda = 0.05;
    m.tide_mean = 3.0;
    m.tide_sd = 0.5;
    return m;
}

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    VariantSpec spec;
    spec.variant = Variant::baseline;
    spec.surge = toy_stationary_model(7);

    TidalSampleSet::YearSample ys;
    ys.source_year = 2000;
    for (int j = 1; j <= 12; ++j) {
        auto& ms = ys.months[j - 1];
        for (int i = 0; i < 5; ++i) {
            ms.peak_tides.push_back(3.0 + 0.3 * std::sin(2.0 * M_PI * j / 12.0) + 0.05 * i);
            ms.day_of_year.push_back(30 * (j - 1) + 1 + 5 * i);
            ms.day_of_month.push_back(1 + 5 * i);
        }
    }
    spec.tides.years.push_back(ys);

    // oracle: direct simulation of the 60-cycle year
    const int n_mc = 200000;
    std::vector<CovariateContext> ctxs;
    std::vector<double> tides;
    for (int j = 1; j <= 12; ++j) {
        const auto& ms = ys.months[j - 1];
        for (std::size_t i = 0; i < ms.peak_tides.size(); ++i) {
            CovariateContext c;
            c.month = j;
            c.day_of_year = ms.day_of_year[i];
            c.day_of_month = ms.day_of_month[i];
            c.mean_day_of_month = mean_day_of_month(j);
            c.peak_tide = ms.peak_tides[i];
            c.tide_mean = spec.surge.tide_mean;
            c.tide_sd = spec.surge.tide_sd;
            ctxs.push_back(c);
            tides.push_back(ms.peak_tides[i]);
        }
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> maxima(n_mc);
    for (int t = 0; t < n_mc; ++t) {
        double mx = -1e300;
        for (std::size_t i = 0; i < ctxs.size(); ++i)
            mx = std::max(mx, tides[i] + spec.surge.quantile(uni(rng), ctxs[i]));
        maxima[t] = mx;
    }
    std::sort(maxima.begin(), maxima.end());

    bool ok = true;
    std::ostringstream d;
    double worst_z = 0.0;
    for (int g = 0; g < 10; ++g) {
        // z-grid across the bulk of the maxima distribution
        const double q = 0.05 + 0.90 * g / 9.0;
        const double z = maxima[static_cast<std::size_t>(q * (n_mc - 1))];
        const auto it = std::upper_bound(maxima.begin(), maxima.end(), z);
        const double p_mc = static_cast<double>(it - maxima.begin()) / n_mc;
        const double p_model = annual_max_cdf(spec, z);
        const double se = std::sqrt(std::max(p_mc * (1.0 - p_mc), 1e-12) / n_mc);
        const double dev = std::fabs(p_model - p_mc) / se;
        worst_z = std::max(worst_z, dev);
        if (dev > 3.0) ok = false;
    }

    const double z01 = return_level(spec, 0.01);
    const auto it = std::upper_bound(maxima.begin(), maxima.end(), z01);
    const double p_mc = static_cast<double>(it - maxima.begin()) / n_mc;
    const double se01 = std::sqrt(0.99 * 0.01 / n_mc);
    const double dev01 = std::fabs(p_mc - 0.99) / se01;
    if (dev01 > 3.0) ok = false;

    d << "max |dev| " << worst_z << " SE on z-grid, " << dev01 << " SE at p=0.01, "
      << elapsed_s(t0) << " s";
    report(5, ok && elapsed_s(t0) < 120.0, d.str());
}

// ---------------------------------------------------------------------------
// 6. Variant collapse: stationary surge, theta == 1, identical tide years.

void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    auto recs = simulate_records(default_sim_truth(), 3, 71);
    auto surge = fit_stationary_surge_model(recs).model;
    auto one = build_tidal_samples(recs, 1);
    TidalSampleSet dup;
    dup.years = {one.years[0], one.years[0], one.years[0]};

    ExiModel unit_theta;
    unit_theta.v = 0.0;
    unit_theta.theta_v = 1.0;
    unit_theta.theta = 1.0;
    unit_theta.psi = 1.0;
    unit_theta.grid_y = {-10.0, 10.0};
    unit_theta.grid_theta = {1.0, 1.0};

    std::vector<VariantSpec> specs;
    for (Variant v :
         {Variant::current, Variant::baseline, Variant::seasonal_surge, Variant::seasonal_tide,
          Variant::full_seasonal, Variant::interaction, Variant::temporal_dependence}) {
        VariantSpec s;
        s.variant = v;
        s.surge = surge;
        s.tides = dup;
        if (v == Variant::temporal_dependence) s.exi = unit_theta;
        specs.push_back(s);
    }

    const double z_lo = return_level(specs[1], 0.5);
    const double z_hi = return_level(specs[1], 0.001);
    double worst = 0.0;
    for (int g = 0; g < 50; ++g) {
        const double z = z_lo + (z_hi - z_lo) * g / 49.0;
        double lo = 2.0, hi = -1.0;
        for (const auto& s : specs) {
            const double c = annual_max_cdf(s, z);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        worst = std::max(worst, hi - lo);
    }
    std::ostringstream d;
    d << "max spread " << worst << " over 50 z, " << elapsed_s(t0) << " s";
    report(6, worst <= 1e-12 && elapsed_s(t0) < 60.0, d.str());
}

// ---------------------------------------------------------------------------
// 7. Extremal index: noiseless curve recovery, continuity at v, and the
//    intervals estimator on a max-autoregressive process.

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    const double theta = 0.95, psi = 0.2, v = 1.0, theta_v = 0.7;
    std::vector<ExiCurvePoint> pts;
    for (int i = 1; i <= 60; ++i) {
        const double y = v + 0.025 * i;
        pts.push_back({y, theta - (theta - theta_v) * std::exp(-(y - v) / psi), 25.0});
    }
    auto [th, ps] = fit_exi_curve(pts, v, theta_v, 3);
    const double err = std::max(std::fabs(th - theta), std::fabs(ps - psi));

    // max-AR chain with extremal index 0.5, mapped to uniform margins
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(1e-12, 1.0 - 1e-12);
    std::vector<double> w(100000);
    double prev = 1.0;
    for (auto& x : w) {
        const double z = -1.0 / std::log(uni(rng));
        prev = std::max(0.5 * prev, 0.5 * z);
        x = std::exp(-1.0 / prev);
    }
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    const double y99 = sorted[static_cast<std::size_t>(0.99 * sorted.size())];
    const double ti = theta_intervals(w, y99);

    auto model = fit_exi_model(w, 5, 0.95, {}, 2);
    const double jump =
        std::fabs(model.eval(std::nextafter(model.v, 2.0)) - model.theta_v);

    std::ostringstream d;
    d << "curve err " << err << ", theta_intervals " << ti << ", continuity gap " << jump
      << ", " << elapsed_s(t0) << " s";
    report(7, err < 1e-6 && std::fabs(ti - 0.5) <= 0.1 && jump < 1e-9 &&
                  elapsed_s(t0) < 120.0,
           d.str());
}

// ---------------------------------------------------------------------------
// 8. Month-of-occurrence probabilities.

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream d;

    // normalisation at 20 levels on a fitted seasonal model
    auto recs = simulate_records(default_sim_truth(), 10, 81);
    VariantSpec spec;
    spec.variant = Variant::full_seasonal;
    spec.surge = fit_surge_model(recs, {}).model;
    spec.tides = build_tidal_samples(recs, 5);
    double worst_sum = 0.0;
    for (int g = 0; g < 20; ++g) {
        const double p = std::exp(std::log(0.5) + (std::log(0.001) - std::log(0.5)) * g / 19.0);
        const auto prof = month_occurrence_profile(spec, return_level(spec, p));
        double sum = 0.0;
        for (double x : prof) sum += x;
        worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
    }
    if (worst_sum > 1e-10) ok = false;

    // symmetric months: identical per-cycle law, so probability scales with
    // the month's cycle count
    {
        VariantSpec sym;
        sym.variant = Variant::baseline;
        sym.surge = toy_stationary_model(13);
        const int counts[12] = {58, 53, 58, 56, 58, 56, 58, 58, 56, 58, 56, 58};
        TidalSampleSet::YearSample ys;
        ys.source_year = 2000;
        double total = 0.0;
        for (int j = 1; j <= 12; ++j) {
            auto& ms = ys.months[j - 1];
            for (int i = 0; i < counts[j - 1]; ++i) {
                ms.peak_tides.push_back(3.0);
                ms.day_of_year.push_back(30 * (j - 1) + 1);
                ms.day_of_month.push_back(15);
            }
            total += counts[j - 1];
        }
        sym.tides.years.push_back(ys);
        const auto prof = month_occurrence_profile(sym, 3.2);
        double worst = 0.0;
        for (int j = 0; j < 12; ++j) worst = std::max(worst, std::fabs(prof[j] - counts[j] / total));
        d << "prop-to-count err " << worst << ", ";
        if (worst > 1e-9) ok = false;
    }

    // the 1-year level's profile against empirical occurrence frequencies
    {
        auto long_recs = simulate_records(default_sim_truth(), 100, 83);
        VariantSpec sp;
        sp.variant = Variant::full_seasonal;
        sp.surge = fit_surge_model(long_recs, {}).model;
        sp.tides = build_tidal_samples(long_recs, 10);
        const double z1 = return_level(sp, 1.0 - std::exp(-1.0));
        const auto prof = month_occurrence_profile(sp, z1);

        // month of each year's maximum
        std::map<int, std::pair<double, int>> best;  // year -> (level, month)
        for (const auto& r : long_recs) {
            if (r.missing) continue;
            const int y = epoch_to_calendar(r.timestamp).year;
            auto& b = best.try_emplace(y, -1e300, 0).first->second;
            if (r.sea_level() > b.first) b = {r.sea_level(), r.month};
        }
        std::vector<int> months;
        for (const auto& [y, b] : best) months.push_back(b.second);
        const std::size_t n = months.size();
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::vector<double>> freq(12);
        for (int b = 0; b < 1000; ++b) {
            std::array<int, 12> cnt{};
            for (std::size_t i = 0; i < n; ++i) ++cnt[static_cast<std::size_t>(months[pick(rng)] - 1)];
            for (int j = 0; j < 12; ++j)
                freq[static_cast<std::size_t>(j)].push_back(static_cast<double>(cnt[j]) / n);
        }
        // the empirical frequencies only resolve multiples of 1/n: a month
        // with zero observed maxima has a degenerate [0,0] band, which a
        // continuous model probability of e.g. 1e-6 must not fail
        const double resolution = 0.5 / static_cast<double>(n);
        int inside = 0;
        for (int j = 0; j < 12; ++j) {
            auto& f = freq[static_cast<std::size_t>(j)];
            std::sort(f.begin(), f.end());
            const double lo = stats::quantile_sorted(f, 0.025) - resolution;
            const double hi = stats::quantile_sorted(f, 0.975) + resolution;
            if (prof[j] >= lo && prof[j] <= hi) ++inside;
        }
        d << "band hits " << inside << "/12, ";
        if (inside < 10) ok = false;
    }

    d << "max |sum-1| " << worst_sum << ", " << elapsed_s(t0) << " s";
    report(8, ok, d.str());
}

// ---------------------------------------------------------------------------
// 9. Bootstrap machinery: determinism, width monotonicity, coverage.

void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    auto truth = default_sim_truth();

    PipelineConfig pc;
    pc.surge.tail = TailVariant::S2;
    pc.surge.rate = RateVariant::R0;
    pc.fit_exi = false;

    // determinism on one small dataset
    bool deterministic = true;
    {
        auto recs = simulate_records(truth, 5, 901);
        auto fit = fit_pipeline(recs, pc);
        auto tides = build_tidal_samples(recs, 1);
        BootstrapConfig bc;
        bc.n_reps = 4;
        bc.seed = 3;
        bc.workers = 1;
        auto a = bootstrap_return_levels(recs, pc, fit, tides, Variant::full_seasonal,
                                         {0.1, 0.01}, bc);
        auto b = bootstrap_return_levels(recs, pc, fit, tides, Variant::full_seasonal,
                                         {0.1, 0.01}, bc);
        for (std::size_t i = 0; i < a.intervals.size(); ++i)
            if (a.intervals[i].lo95 != b.intervals[i].lo95 ||
                a.intervals[i].hi95 != b.intervals[i].hi95)
                deterministic = false;
    }

    const int datasets = 100;
    const std::vector<double> ps = {0.1, 0.01, 0.001};
    std::atomic<int> covered{0}, monotone{0}, failed_sets{0};
    parallel_for(datasets, [&](std::size_t i) {
        try {
            auto recs = simulate_records(truth, 5, 9000 + i);
            auto fit = fit_pipeline(recs, pc);
            auto tides = build_tidal_samples(recs, 1);

            // truth 100-year level on the same tidal sample
            const auto& ys = tides.years[0];
            double m, s;
            tide_moments(recs, m, s);
            auto truth_cdf = [&](double z) {
                double logp = 0.0;
                for (int j = 1; j <= 12; ++j) {
                    const auto& ms = ys.months[j - 1];
                    for (std::size_t c = 0; c < ms.peak_tides.size(); ++c) {
                        CovariateContext ctx;
                        ctx.month = j;
                        ctx.day_of_year = ms.day_of_year[c];
                        ctx.day_of_month = ms.day_of_month[c];
                        ctx.mean_day_of_month = mean_day_of_month(j);
                        ctx.peak_tide = ms.peak_tides[c];
                        ctx.tide_mean = m;
                        ctx.tide_sd = s;
                        const double f = truth.cdf(z - ms.peak_tides[c], ctx);
                        if (f <= 0.0) return 0.0;
                        logp += std::log(f);
                    }
                }
                return std::exp(logp);
            };
            double lo = 5.0, hi = 12.0;
            while (truth_cdf(hi) < 0.99) hi += 2.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (truth_cdf(mid) >= 0.99 ? hi : lo) = mid;
            }
            const double z_true = hi;

            BootstrapConfig bc;
            bc.n_reps = 100;
            bc.seed = 40000 + i;
            bc.workers = 1;
            auto res =
                bootstrap_return_levels(recs, pc, fit, tides, Variant::full_seasonal, ps, bc);
            const double w0 = res.intervals[0].hi95 - res.intervals[0].lo95;
            const double w1 = res.intervals[1].hi95 - res.intervals[1].lo95;
            const double w2 = res.intervals[2].hi95 - res.intervals[2].lo95;
            if (w1 >= w0 && w2 >= w1) ++monotone;
            if (z_true >= res.intervals[1].lo95 && z_true <= res.intervals[1].hi95) ++covered;
        } catch (const std::exception&) {
            ++failed_sets;
        }
    });

    std::ostringstream d;
    d << "deterministic " << (deterministic ? "yes" : "no") << ", monotone " << monotone << "/"
      << datasets << ", coverage " << covered << "/" << datasets << ", failures " << failed_sets
      << ", " << elapsed_s(t0) << " s";
    report(9, deterministic && monotone >= 95 && covered >= 85 && failed_sets == 0 &&
                  elapsed_s(t0) < 1800.0,
           d.str());
}

// ---------------------------------------------------------------------------
// 10. Shape prior shrinks the replicate spread of the shape estimate.

void criterion_10() {
    const auto t0 = std::chrono::steady_clock::now();
    auto recs = simulate_records(default_sim_truth(), 4, 111);
    auto th = compute_thresholds(recs, 0.95);
    double m, s;
    tide_moments(recs, m, s);
    auto data = extract_exceedances(recs, th, m, s);

    const int reps = 200;
    std::vector<double> xi_with(reps), xi_without(reps);
    parallel_for(reps, [&](std::size_t i) {
        std::mt19937_64 rng(500 + i);
        std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
        std::vector<Exceedance> resample;
        resample.reserve(data.size());
        for (std::size_t k = 0; k < data.size(); ++k) resample.push_back(data[pick(rng)]);
        xi_with[i] =
            fit_tail(TailModelSpec{TailVariant::S2}, resample, ShapePrior{}, i).params.xi;
        xi_without[i] =
            fit_tail(TailModelSpec{TailVariant::S2}, resample, std::nullopt, i).params.xi;
    });
    auto sd = [](const std::vector<double>& x) {
        double mu = 0.0;
        for (double v : x) mu += v;
        mu /= static_cast<double>(x.size());
        double acc = 0.0;
        for (double v : x) acc += (v - mu) * (v - mu);
        return std::sqrt(acc / static_cast<double>(x.size() - 1));
    };
    const double s_with = sd(xi_with), s_without = sd(xi_without);
    std::ostringstream d;
    d << "sd(xi) with prior " << s_with << " vs " << s_without << ", " << elapsed_s(t0) << " s";
    report(10, s_with <= s_without, d.str());
}

// ---------------------------------------------------------------------------
// 11. Dependence-test calibration and power.

void criterion_11() {
    const auto t0 = std::chrono::steady_clock::now();
    auto truth = default_sim_truth();
    truth.tail.beta_sigma = 0.0;   // stationary surge: no seasonal confounding
    truth.rate.beta_lambda = 0.0;  // with the seasonal tide harmonics

    const int reps = 500;
    std::atomic<int> rej_ks{0}, rej_ad{0}, rej_block{0};
    parallel_for(reps, [&](std::size_t i) {
        auto recs = simulate_records(truth, 2, 20000 + i);
        if (ranked_tide_uniformity(recs, 0.95, 10, 1, i).p_raw < 0.05) ++rej_ks;
        if (extreme_tide_ad(recs, 0.95).p_value < 0.05) ++rej_ad;
        if (quantile_block_trend(recs, 100, 0.95).p_value < 0.05) ++rej_block;
    });

    auto in_window = [&](int k) {
        const double r = static_cast<double>(k) / reps;
        return r >= 0.03 && r <= 0.08;
    };

    // power against extremes forced onto the lowest tides
    const int power_reps = 100;
    std::atomic<int> detected{0};
    parallel_for(power_reps, [&](std::size_t i) {
        auto recs = simulate_records(truth, 2, 30000 + i);
        std::vector<double> surges;
        for (const auto& r : recs)
            if (!r.missing) surges.push_back(r.skew_surge);
        std::sort(surges.begin(), surges.end());
        const double u = surges[static_cast<std::size_t>(0.95 * surges.size())];
        std::vector<std::size_t> order(recs.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return recs[a].peak_tide < recs[b].peak_tide;
        });
        std::size_t n_extreme = 0;
        for (auto& r : recs)
            if (!r.missing && r.skew_surge > u) {
                r.skew_surge = u - 0.01;
                ++n_extreme;
            }
        for (std::size_t k = 0; k < n_extreme; ++k) {
            recs[order[k]].skew_surge = u + 0.05;
            recs[order[k]].missing = false;
        }
        if (ranked_tide_uniformity(recs, 0.95, 10, 1, i).p_raw < 0.05) ++detected;
    });

    std::ostringstream d;
    d << "rejections ks " << rej_ks << " ad " << rej_ad << " block " << rej_block << "/" << reps
      << ", power " << detected << "/" << power_reps << ", " << elapsed_s(t0) << " s";
    report(11,
           in_window(rej_ks) && in_window(rej_ad) && in_window(rej_block) &&
               detected >= 90,
           d.str());
}

// ---------------------------------------------------------------------------
// 12. Optional real-data fixtures (site gauge CSVs). Skipped when absent.

struct SiteTable {
    double a_lo, a_hi;      // alpha_sigma CI
    double b_lo, b_hi;      // beta_sigma CI
    double p_lo, p_hi;      // phi_sigma CI
    double x_lo, x_hi;      // xi CI
};

void criterion_12() {
    const char* env = std::getenv("SEALEVEL_GAUGE_DIR");
    std::filesystem::path dir = env ? env : "data/gauges";
    if (!std::filesystem::is_directory(dir)) {
        report_skip(12, "no real gauge data supplied; set SEALEVEL_GAUGE_DIR");
        return;
    }
    const std::map<std::string, SiteTable> table = {
        {"HEY", {0.13, 0.15, 0.050, 0.070, 262.77, 280.23, -0.042, 0.051}},
        {"LOW", {0.14, 0.16, 0.070, 0.090, 260.01, 272.63, -0.023, 0.071}},
        {"NEW", {0.073, 0.080, 0.020, 0.028, 265.06, 282.10, -0.074, 0.006}},
        {"SHE", {0.10, 0.12, 0.043, 0.061, 262.66, 281.56, -0.029, 0.10}},
    };
    bool ok = true;
    bool any = false;
    std::ostringstream d;
    for (const auto& [site, ci] : table) {
        const auto path = dir / (site + ".csv");
        if (!std::filesystem::exists(path)) continue;
        any = true;
        auto recs = parse_records_file(path.string());
        recs = detrend_linear(recs).records;
        auto th = compute_thresholds(recs, 0.95);
        double m, s;
        tide_moments(recs, m, s);
        auto data = extract_exceedances(recs, th, m, s);
        auto fit = fit_tail(TailModelSpec{TailVariant::S2}, data, std::nullopt, 1);
        const bool site_ok = fit.params.alpha_sigma >= ci.a_lo &&
                             fit.params.alpha_sigma <= ci.a_hi &&
                             fit.params.beta_sigma >= ci.b_lo &&
                             fit.params.beta_sigma <= ci.b_hi &&
                             fit.params.phi_sigma >= ci.p_lo &&
                             fit.params.phi_sigma <= ci.p_hi && fit.params.xi >= ci.x_lo &&
                             fit.params.xi <= ci.x_hi;
        d << site << (site_ok ? " ok " : " out-of-CI ");
        ok = ok && site_ok;
        if (site == "HEY") {
            std::vector<double> surges;
            for (const auto& r : recs)
                if (!r.missing) surges.push_back(r.skew_surge);
            auto exi = fit_exi_model(surges, 2);
            d << "theta " << exi.theta << " ";
            ok = ok && exi.theta > 0.99;
        }
        if (site == "SHE") {
            const auto uni = ranked_tide_uniformity(recs, 0.95, 6, 100, 1);
            d << "ks_p " << uni.p_raw << " ";
            ok = ok && uni.p_raw < 1e-2;
        }
    }
    if (!any) {
        report_skip(12, "gauge directory present but no site CSVs found");
        return;
    }
    report(12, ok, d.str());
}

}  // namespace

int main(int argc, char** argv) {
    // optional args select individual criteria, e.g. "acceptance 2 4"
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    auto wanted = [&](int n) {
        return which.empty() || std::find(which.begin(), which.end(), n) != which.end();
    };
    const std::function<void()> criteria[] = {
        criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,  criterion_6,
        criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12};
    for (int n = 1; n <= 12; ++n)
        if (wanted(n)) criteria[n - 1]();
    if (g_failures > 0) {
        std::cout << g_failures << " acceptance criteria failed" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed" << std::endl;
    return 0;
}
