#include "sealevel/simulate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "sealevel/stats.hpp"

namespace sealevel {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double tide_at(const SimTruth& truth, double t_days) {
    double x = truth.tide_base;
    for (const auto& c : truth.tide_components)
        x += c.amplitude * std::cos(kTwoPi * (t_days - c.phase_days) / c.period_days);
    return x;
}

}  // namespace

void SimTruth::validate() const {
    if (!(body_sd > 0.0)) throw std::invalid_argument("sim truth: body_sd must be > 0");
    if (!(q_u > 0.0 && q_u < 1.0)) throw std::invalid_argument("sim truth: q_u must be in (0,1)");
    if (!(rate.lambda > 0.0 && rate.lambda < 1.0))
        throw std::invalid_argument("sim truth: lambda must be in (0,1)");
    if (!tail_spec.per_month_scale()) {
        if (!(tail.alpha_sigma > tail.beta_sigma + tail.beta_sigma2) || tail.beta_sigma < 0.0)
            throw std::invalid_argument("sim truth: need alpha_sigma > beta_sigma >= 0");
    }
    if (tail.xi <= -1.0) throw std::invalid_argument("sim truth: shape must exceed -1");
    if (!(cluster_alpha >= 0.0 && cluster_alpha < 1.0))
        throw std::invalid_argument("sim truth: cluster_alpha must be in [0,1)");
    for (const auto& c : tide_components)
        if (!(c.period_days > 0.0))
            throw std::invalid_argument("sim truth: tide periods must be positive");
}

double SimTruth::resolved_threshold() const {
    if (threshold > 0.0) return threshold;
    return body_sd * stats::normal_quantile(q_u);
}

double SimTruth::cdf(double y, const CovariateContext& ctx) const {
    const double u0 = resolved_threshold();
    const double lam = eval_lambda(rate, rate_variant, ctx);
    if (y <= u0) {
        const double body = stats::normal_cdf(y / body_sd) / stats::normal_cdf(u0 / body_sd);
        return (1.0 - lam) * body;
    }
    const double sigma = eval_sigma(tail, tail_spec, ctx);
    const double w = (y - u0) / sigma;
    double surv;
    if (std::fabs(tail.xi) < 1e-8) {
        surv = std::exp(-w);
    } else {
        const double t = 1.0 + tail.xi * w;
        surv = t <= 0.0 ? 0.0 : std::pow(t, -1.0 / tail.xi);
    }
    return 1.0 - lam * surv;
}

double SimTruth::quantile(double u, const CovariateContext& ctx) const {
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("sim truth quantile: u in (0,1)");
    const double u0 = resolved_threshold();
    const double lam = eval_lambda(rate, rate_variant, ctx);
    if (u <= 1.0 - lam) {
        const double body = u / (1.0 - lam) * stats::normal_cdf(u0 / body_sd);
        return body_sd * stats::normal_quantile(body);
    }
    const double sigma = eval_sigma(tail, tail_spec, ctx);
    const double pe = (1.0 - u) / lam;
    if (std::fabs(tail.xi) < 1e-8) return u0 - sigma * std::log(pe);
    return u0 + sigma / tail.xi * (std::pow(pe, -tail.xi) - 1.0);
}

SimTruth default_sim_truth() {
    SimTruth t;
    t.tide_base = 5.0;
    t.tide_components = {
        {2.0, 14.76, 3.0},    // spring-neap envelope
        {0.6, 182.62, 80.0},  // semi-annual modulation
        {0.2, 6793.0, 0.0},   // nodal-scale drift
    };
    t.body_sd = 0.12;
    t.q_u = 0.95;
    t.tail_spec.variant = TailVariant::S2;
    t.tail.alpha_sigma = 0.14;
    t.tail.beta_sigma = 0.060;
    t.tail.phi_sigma = 271.51;
    t.tail.xi = 0.002;
    t.rate_variant = RateVariant::R0;
    t.rate.lambda = 0.05;
    t.rate.beta_lambda = 0.02;
    t.rate.phi_lambda = 300.0;
    t.cluster_alpha = 0.0;
    return t;
}

std::vector<TidalCycleRecord> simulate_records(const SimTruth& truth, int years,
                                               std::uint64_t seed, int start_year) {
    truth.validate();
    if (years < 1) throw std::invalid_argument("simulate_records: years must be >= 1");

    const std::int64_t t0 = civil_to_epoch(start_year, 1, 1, 6, 0, 0);
    const std::int64_t t_end = civil_to_epoch(start_year + years, 1, 1, 0, 0, 0);

    // pass 1: tides, so covariate moments match what a fit would recompute
    std::vector<TidalCycleRecord> out;
    for (std::int64_t ts = t0; ts < t_end; ts += kTidalCycleSeconds) {
        TidalCycleRecord r;
        r.timestamp = ts;
        r.peak_tide = tide_at(truth, static_cast<double>(ts - t0) / 86400.0);
        const CalendarInfo c = epoch_to_calendar(ts);
        r.year_index = c.year - start_year + 1;
        r.month = c.month;
        r.day_of_year = c.day_of_year;
        r.day_of_month = c.day_of_month;
        out.push_back(r);
    }
    double tide_mean, tide_sd;
    tide_moments(out, tide_mean, tide_sd);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (truth.cluster_alpha == 0.0) {
        for (auto& r : out) {
            double u = unif(rng);
            u = std::min(std::max(u, 1e-15), 1.0 - 1e-15);
            r.skew_surge = truth.quantile(u, make_context(r, tide_mean, tide_sd));
        }
    } else {
        // max-autoregressive Frechet process: W_i = max(a W_{i-1}, (1-a) Z_i)
        // has extremal index 1 - a; U_i = exp(-1/W_i) are Uniform(0,1)
        const double a = truth.cluster_alpha;
        double w = -1.0 / std::log(unif(rng));  // unit Frechet start
        for (auto& r : out) {
            const double z = -1.0 / std::log(std::min(std::max(unif(rng), 1e-15), 1.0 - 1e-15));
            w = std::max(a * w, (1.0 - a) * z);
            double u = std::exp(-1.0 / w);
            u = std::min(std::max(u, 1e-15), 1.0 - 1e-15);
            r.skew_surge = truth.quantile(u, make_context(r, tide_mean, tide_sd));
        }
    }
    return out;
}

}  // namespace sealevel
