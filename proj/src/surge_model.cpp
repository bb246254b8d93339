#include "sealevel/surge_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <stdexcept>

#include "sealevel/optim.hpp"
#include "sealevel/stats.hpp"

namespace sealevel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * M_PI;

double harmonic(double amplitude, double phase_days, int d, double period = kPeriodicityDays) {
    return amplitude * std::sin(kTwoPi / period * (static_cast<double>(d) - phase_days));
}

double logit(double p) { return std::log(p / (1.0 - p)); }
double inv_logit(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

// (a,b) circle coordinates <-> (beta, phi) with beta >= 0, phi in [0, f).
void ab_to_polar(double a, double b, double period, double& beta, double& phi) {
    beta = std::hypot(a, b);
    phi = std::atan2(b, a) * period / kTwoPi;
    phi = std::fmod(phi, period);
    if (phi < 0.0) phi += period;
}

void polar_to_ab(double beta, double phi, double period, double& a, double& b) {
    a = beta * std::cos(kTwoPi * phi / period);
    b = beta * std::sin(kTwoPi * phi / period);
}

// a*sin(w d) - b*cos(w d) == beta*sin(w(d - phi)) for (a,b) as above.
double ab_harmonic(double a, double b, int d, double period = kPeriodicityDays) {
    const double w = kTwoPi / period;
    return a * std::sin(w * d) - b * std::cos(w * d);
}

}  // namespace

const char* to_string(TailVariant v) {
    switch (v) {
        case TailVariant::S0: return "S0";
        case TailVariant::S1: return "S1";
        case TailVariant::S2: return "S2";
        case TailVariant::S3: return "S3";
        case TailVariant::S4: return "S4";
    }
    return "?";
}

TailVariant tail_variant_from_string(const std::string& s) {
    for (TailVariant v : {TailVariant::S0, TailVariant::S1, TailVariant::S2, TailVariant::S3,
                          TailVariant::S4})
        if (s == to_string(v)) return v;
    throw std::invalid_argument("unknown tail model: " + s);
}

const char* to_string(RateVariant v) { return v == RateVariant::R0 ? "R0" : "R1"; }

RateVariant rate_variant_from_string(const std::string& s) {
    if (s == "R0") return RateVariant::R0;
    if (s == "R1") return RateVariant::R1;
    throw std::invalid_argument("unknown rate model: " + s);
}

int TailModelSpec::param_count() const {
    switch (variant) {
        case TailVariant::S0: return 24;
        case TailVariant::S1: return 13;
        case TailVariant::S2: return 4;
        case TailVariant::S3: return 6;
        case TailVariant::S4: return 5;
    }
    return 0;
}

double eval_sigma(const TailParams& p, const TailModelSpec& spec, const CovariateContext& ctx) {
    double sigma;
    if (spec.per_month_scale()) {
        sigma = p.sigma_month[ctx.month - 1];
    } else {
        sigma = p.alpha_sigma + harmonic(p.beta_sigma, p.phi_sigma, ctx.day_of_year);
        if (spec.second_harmonic())
            sigma += harmonic(p.beta_sigma2, p.phi_sigma2, ctx.day_of_year,
                              kPeriodicityDays / 2.0);
        if (spec.tide_in_scale()) sigma += p.gamma_sigma_x * ctx.peak_tide;
    }
    if (!(sigma > 0.0)) throw std::runtime_error("eval_sigma: nonpositive scale parameter");
    return sigma;
}

namespace {

double sigma_or_nan(const TailParams& p, const TailModelSpec& spec,
                    const CovariateContext& ctx) {
    double sigma;
    if (spec.per_month_scale()) {
        sigma = p.sigma_month[ctx.month - 1];
    } else {
        sigma = p.alpha_sigma + harmonic(p.beta_sigma, p.phi_sigma, ctx.day_of_year);
        if (spec.second_harmonic())
            sigma += harmonic(p.beta_sigma2, p.phi_sigma2, ctx.day_of_year,
                              kPeriodicityDays / 2.0);
        if (spec.tide_in_scale()) sigma += p.gamma_sigma_x * ctx.peak_tide;
    }
    return sigma;
}

}  // namespace

double nll_tail(const TailParams& p, const TailModelSpec& spec,
                const std::vector<Exceedance>& data) {
    double nll = 0.0;
    for (const auto& e : data) {
        const double sigma = sigma_or_nan(p, spec, e.ctx);
        if (!(sigma > 0.0)) return kInf;
        const double xi = spec.per_month_shape() ? p.xi_month[e.ctx.month - 1] : p.xi;
        if (xi <= -1.0) return kInf;
        const double w = e.excess / sigma;
        if (std::fabs(xi) < 1e-8) {
            nll += std::log(sigma) + w;
        } else {
            const double t = xi * w;
            if (1.0 + t <= 0.0) return kInf;
            nll += std::log(sigma) + (1.0 / xi + 1.0) * std::log1p(t);
        }
    }
    return nll;
}

namespace {

struct TailPack {
    // Maps the optimiser vector to TailParams and back, per model spec.
    TailModelSpec spec;

    std::size_t dim() const {
        switch (spec.variant) {
            case TailVariant::S0: return 24;
            case TailVariant::S1: return 13;
            case TailVariant::S2: return 4;
            case TailVariant::S3: return 6;
            case TailVariant::S4: return 5;
        }
        return 0;
    }

    TailParams unpack(const std::vector<double>& x) const {
        TailParams p;
        switch (spec.variant) {
            case TailVariant::S0:
                for (int j = 0; j < 12; ++j) {
                    p.sigma_month[j] = x[j];
                    p.xi_month[j] = x[12 + j];
                }
                break;
            case TailVariant::S1:
                for (int j = 0; j < 12; ++j) p.sigma_month[j] = x[j];
                p.xi = x[12];
                break;
            case TailVariant::S2:
            case TailVariant::S3:
            case TailVariant::S4: {
                p.alpha_sigma = x[0];
                ab_to_polar(x[1], x[2], kPeriodicityDays, p.beta_sigma, p.phi_sigma);
                std::size_t i = 3;
                if (spec.second_harmonic()) {
                    ab_to_polar(x[3], x[4], kPeriodicityDays / 2.0, p.beta_sigma2,
                                p.phi_sigma2);
                    i = 5;
                }
                if (spec.tide_in_scale()) p.gamma_sigma_x = x[i++];
                p.xi = x[i];
                break;
            }
        }
        return p;
    }

    std::vector<double> pack(const TailParams& p) const {
        std::vector<double> x(dim(), 0.0);
        switch (spec.variant) {
            case TailVariant::S0:
                for (int j = 0; j < 12; ++j) {
                    x[j] = p.sigma_month[j];
                    x[12 + j] = p.xi_month[j];
                }
                break;
            case TailVariant::S1:
                for (int j = 0; j < 12; ++j) x[j] = p.sigma_month[j];
                x[12] = p.xi;
                break;
            case TailVariant::S2:
            case TailVariant::S3:
            case TailVariant::S4: {
                x[0] = p.alpha_sigma;
                polar_to_ab(p.beta_sigma, p.phi_sigma, kPeriodicityDays, x[1], x[2]);
                std::size_t i = 3;
                if (spec.second_harmonic()) {
                    polar_to_ab(p.beta_sigma2, p.phi_sigma2, kPeriodicityDays / 2.0, x[3], x[4]);
                    i = 5;
                }
                if (spec.tide_in_scale()) x[i++] = p.gamma_sigma_x;
                x[i] = p.xi;
                break;
            }
        }
        return x;
    }

    // Natural-parameter vector used for Hessian confidence intervals.
    std::vector<std::pair<std::string, double>> report(const TailParams& p) const {
        std::vector<std::pair<std::string, double>> out;
        switch (spec.variant) {
            case TailVariant::S0:
                for (int j = 0; j < 12; ++j)
                    out.emplace_back("sigma_" + std::to_string(j + 1), p.sigma_month[j]);
                for (int j = 0; j < 12; ++j)
                    out.emplace_back("xi_" + std::to_string(j + 1), p.xi_month[j]);
                break;
            case TailVariant::S1:
                for (int j = 0; j < 12; ++j)
                    out.emplace_back("sigma_" + std::to_string(j + 1), p.sigma_month[j]);
                out.emplace_back("xi", p.xi);
                break;
            default:
                out.emplace_back("alpha_sigma", p.alpha_sigma);
                out.emplace_back("beta_sigma", p.beta_sigma);
                out.emplace_back("phi_sigma", p.phi_sigma);
                if (spec.second_harmonic()) {
                    out.emplace_back("beta_sigma2", p.beta_sigma2);
                    out.emplace_back("phi_sigma2", p.phi_sigma2);
                }
                if (spec.tide_in_scale()) out.emplace_back("gamma_sigma_x", p.gamma_sigma_x);
                out.emplace_back("xi", p.xi);
                break;
        }
        return out;
    }

    TailParams from_report(const TailParams& base, const std::vector<double>& v) const {
        TailParams p = base;
        switch (spec.variant) {
            case TailVariant::S0:
                for (int j = 0; j < 12; ++j) {
                    p.sigma_month[j] = v[j];
                    p.xi_month[j] = v[12 + j];
                }
                break;
            case TailVariant::S1:
                for (int j = 0; j < 12; ++j) p.sigma_month[j] = v[j];
                p.xi = v[12];
                break;
            default: {
                p.alpha_sigma = v[0];
                p.beta_sigma = v[1];
                p.phi_sigma = v[2];
                std::size_t i = 3;
                if (spec.second_harmonic()) {
                    p.beta_sigma2 = v[3];
                    p.phi_sigma2 = v[4];
                    i = 5;
                }
                if (spec.tide_in_scale()) p.gamma_sigma_x = v[i++];
                p.xi = v[i];
                break;
            }
        }
        return p;
    }
};

double prior_penalty(const TailParams& p, const TailModelSpec& spec,
                     const std::optional<ShapePrior>& prior) {
    if (!prior) return 0.0;
    if (spec.per_month_shape()) {
        double s = 0.0;
        for (double xi : p.xi_month)
            s += (xi - prior->mean) * (xi - prior->mean) / (2.0 * prior->sd * prior->sd);
        return s;
    }
    const double d = p.xi - prior->mean;
    return d * d / (2.0 * prior->sd * prior->sd);
}

std::vector<ParamEstimate> hessian_cis(
    const std::function<double(const std::vector<double>&)>& nll_nat,
    const std::vector<std::pair<std::string, double>>& report) {
    std::vector<double> x0;
    x0.reserve(report.size());
    for (const auto& [name, v] : report) x0.push_back(v);
    std::vector<ParamEstimate> out;
    try {
        auto H = optim::fd_hessian(nll_nat, x0, 1e-4);
        auto cov = optim::invert(H, x0.size());
        for (std::size_t i = 0; i < x0.size(); ++i) {
            const double var = cov[i * x0.size() + i];
            const double se = var > 0.0 ? std::sqrt(var) : std::numeric_limits<double>::quiet_NaN();
            out.push_back({report[i].first, x0[i], x0[i] - 1.96 * se, x0[i] + 1.96 * se});
        }
    } catch (const std::exception&) {
        for (const auto& [name, v] : report)
            out.push_back({name, v, std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN()});
    }
    return out;
}

}  // namespace

namespace {

// Per-month scale and shape: the likelihood separates over months, so fit
// twelve independent two-parameter models.
TailFit fit_tail_s0(const std::vector<Exceedance>& data, std::optional<ShapePrior> prior,
                    std::uint64_t seed) {
    TailFit fit;
    fit.spec.variant = TailVariant::S0;
    fit.n = data.size();
    fit.nll = 0.0;
    std::vector<ParamEstimate> sigma_est, xi_est;
    for (int j = 1; j <= 12; ++j) {
        std::vector<Exceedance> month;
        for (const auto& e : data)
            if (e.ctx.month == j) month.push_back(e);
        if (month.size() < 5)
            throw std::runtime_error("fit_tail: month " + std::to_string(j) +
                                     " has too few exceedances for a per-month shape");
        double mean_excess = 0.0;
        for (const auto& e : month) mean_excess += e.excess;
        mean_excess /= static_cast<double>(month.size());

        auto nll2 = [&](double sigma, double xi) {
            if (sigma <= 0.0 || xi <= -1.0) return kInf;
            double nll = 0.0;
            for (const auto& e : month) {
                const double w = e.excess / sigma;
                if (std::fabs(xi) < 1e-8) {
                    nll += std::log(sigma) + w;
                } else {
                    const double t = xi * w;
                    if (1.0 + t <= 0.0) return kInf;
                    nll += std::log(sigma) + (1.0 / xi + 1.0) * std::log1p(t);
                }
            }
            if (prior) {
                const double d = xi - prior->mean;
                nll += d * d / (2.0 * prior->sd * prior->sd);
            }
            return nll;
        };
        auto obj = [&](const std::vector<double>& x) { return nll2(x[0], x[1]); };
        optim::SimplexOptions so;
        so.seed = seed + static_cast<std::uint64_t>(j);
        so.step = {0.1 * std::max(mean_excess, 1e-3), 0.05};
        auto res = optim::minimize(obj, {mean_excess, 0.05}, so);
        fit.params.sigma_month[j - 1] = res.x[0];
        fit.params.xi_month[j - 1] = res.x[1];
        fit.nll += nll2(res.x[0], res.x[1]);
        if (prior) {
            const double d = res.x[1] - prior->mean;
            fit.nll -= d * d / (2.0 * prior->sd * prior->sd);
        }
        auto cis = hessian_cis(obj, {{"sigma_" + std::to_string(j), res.x[0]},
                                     {"xi_" + std::to_string(j), res.x[1]}});
        sigma_est.push_back(cis[0]);
        xi_est.push_back(cis[1]);
    }
    for (auto& e : sigma_est) fit.estimates.push_back(std::move(e));
    for (auto& e : xi_est) fit.estimates.push_back(std::move(e));
    fit.aic = 2.0 * 24 + 2.0 * fit.nll;
    fit.bic = 24.0 * std::log(static_cast<double>(fit.n)) + 2.0 * fit.nll;
    return fit;
}

}  // namespace

TailFit fit_tail(const TailModelSpec& spec, const std::vector<Exceedance>& data,
                 std::optional<ShapePrior> prior, std::uint64_t seed) {
    if (data.size() < 30) throw std::runtime_error("fit_tail needs >= 30 exceedances");
    if (spec.variant == TailVariant::S0) return fit_tail_s0(data, prior, seed);
    TailPack pack{spec};

    auto objective = [&](const std::vector<double>& x) {
        TailParams p = pack.unpack(x);
        // identity-link positivity: sigma_d > 0 requires alpha > beta (+ tide slack)
        if (!spec.per_month_scale() && p.alpha_sigma <= p.beta_sigma + p.beta_sigma2)
            return kInf;
        const double base = nll_tail(p, spec, data);
        if (!std::isfinite(base)) return base;
        return base + prior_penalty(p, spec, prior);
    };

    // moment-based initialisation: sigma from the mean excess, xi = 0.05
    double mean_excess = 0.0;
    for (const auto& e : data) mean_excess += e.excess;
    mean_excess /= static_cast<double>(data.size());

    TailParams init;
    init.alpha_sigma = mean_excess;
    init.beta_sigma = 0.2 * mean_excess;
    init.phi_sigma = 270.0;
    init.beta_sigma2 = 0.05 * mean_excess;
    init.phi_sigma2 = 100.0;
    init.gamma_sigma_x = 0.0;
    init.xi = 0.05;
    for (int j = 0; j < 12; ++j) {
        double s = 0.0;
        std::size_t n = 0;
        for (const auto& e : data)
            if (e.ctx.month == j + 1) {
                s += e.excess;
                ++n;
            }
        init.sigma_month[j] = n > 0 ? s / static_cast<double>(n) : mean_excess;
        init.xi_month[j] = 0.05;
    }

    optim::SimplexOptions opt;
    opt.seed = seed;
    opt.restarts = 5;
    opt.max_iter = spec.per_month_scale() ? 8000 : 4000;
    opt.step.assign(pack.dim(), 0.02 * std::max(mean_excess, 1e-3));
    // shape entries move on a different scale
    if (spec.variant == TailVariant::S0) {
        for (int j = 0; j < 12; ++j) opt.step[12 + j] = 0.05;
    } else if (spec.variant == TailVariant::S1) {
        opt.step[12] = 0.05;
    } else {
        opt.step.back() = 0.05;
    }

    auto res = optim::minimize(objective, pack.pack(init), opt);
    if (!std::isfinite(res.fmin))
        throw std::runtime_error("fit_tail failed to find a finite likelihood");
    const double gnorm = [&] {
        double g2 = 0.0;
        for (double gi : optim::fd_gradient(objective, res.x, 1e-5)) g2 += gi * gi;
        return std::sqrt(g2);
    }();
    if (!res.converged && gnorm > 1e-2)
        throw std::runtime_error("fit_tail did not converge (|grad| = " + std::to_string(gnorm) +
                                 ")");

    TailFit fit;
    fit.spec = spec;
    fit.params = pack.unpack(res.x);
    fit.n = data.size();
    fit.nll = nll_tail(fit.params, spec, data);
    const int k = spec.param_count();
    fit.aic = 2.0 * k + 2.0 * fit.nll;
    fit.bic = k * std::log(static_cast<double>(fit.n)) + 2.0 * fit.nll;

    const auto report = pack.report(fit.params);
    auto nll_nat = [&](const std::vector<double>& v) {
        TailParams p = pack.from_report(fit.params, v);
        const double base = nll_tail(p, spec, data);
        if (!std::isfinite(base)) return base;
        return base + prior_penalty(p, spec, prior);
    };
    fit.estimates = hessian_cis(nll_nat, report);
    return fit;
}

double eval_lambda(const RateParams& p, RateVariant v, const CovariateContext& ctx) {
    double eta = logit(p.lambda) +
                 ctx.day_offset() * harmonic(p.beta_lambda, p.phi_lambda, ctx.day_of_year);
    if (v == RateVariant::R1)
        eta += ctx.standardized_tide() *
               (p.alpha_lambda_x +
                harmonic(p.beta_lambda_x, p.phi_lambda_x, ctx.day_of_year));
    return inv_logit(eta);
}

RateFit fit_rate(RateVariant v, const std::vector<RateObs>& data, double lambda,
                 std::uint64_t seed) {
    if (data.empty()) throw std::invalid_argument("fit_rate: no observations");
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must be in (0,1)");
    std::size_t n1 = 0;
    for (const auto& o : data) n1 += o.exceeded ? 1 : 0;
    if (n1 == 0 || n1 == data.size())
        throw std::runtime_error("fit_rate: complete separation (single response class)");

    const std::size_t dim = v == RateVariant::R0 ? 2 : 5;
    const double eta0 = logit(lambda);

    auto eval_eta = [&](const std::vector<double>& x, const CovariateContext& ctx) {
        double eta = eta0 + ctx.day_offset() * ab_harmonic(x[0], x[1], ctx.day_of_year);
        if (v == RateVariant::R1)
            eta += ctx.standardized_tide() *
                   (x[2] + ab_harmonic(x[3], x[4], ctx.day_of_year));
        return eta;
    };
    auto objective = [&](const std::vector<double>& x) {
        double nll = 0.0;
        for (const auto& o : data) {
            const double eta = eval_eta(x, o.ctx);
            // log(1 + e^eta) - v*eta, numerically stable
            const double lse = eta > 0.0 ? eta + std::log1p(std::exp(-eta))
                                         : std::log1p(std::exp(eta));
            nll += lse - (o.exceeded ? eta : 0.0);
        }
        return nll;
    };

    optim::SimplexOptions opt;
    opt.seed = seed;
    opt.restarts = 3;
    opt.max_iter = 3000;
    opt.step.assign(dim, 0.01);
    auto res = optim::minimize(objective, std::vector<double>(dim, 0.0), opt);

    RateFit fit;
    fit.variant = v;
    fit.params.lambda = lambda;
    ab_to_polar(res.x[0], res.x[1], kPeriodicityDays, fit.params.beta_lambda,
                fit.params.phi_lambda);
    if (v == RateVariant::R1) {
        fit.params.alpha_lambda_x = res.x[2];
        ab_to_polar(res.x[3], res.x[4], kPeriodicityDays, fit.params.beta_lambda_x,
                    fit.params.phi_lambda_x);
    }
    fit.n = data.size();
    fit.nll = res.fmin;
    const int k = static_cast<int>(dim);
    fit.aic = 2.0 * k + 2.0 * fit.nll;
    fit.bic = k * std::log(static_cast<double>(fit.n)) + 2.0 * fit.nll;

    // CIs in natural coordinates (beta, phi[, alpha_x, beta_x, phi_x])
    std::vector<std::pair<std::string, double>> report = {
        {"beta_lambda", fit.params.beta_lambda}, {"phi_lambda", fit.params.phi_lambda}};
    if (v == RateVariant::R1) {
        report.emplace_back("alpha_lambda_x", fit.params.alpha_lambda_x);
        report.emplace_back("beta_lambda_x", fit.params.beta_lambda_x);
        report.emplace_back("phi_lambda_x", fit.params.phi_lambda_x);
    }
    auto nll_nat = [&](const std::vector<double>& nat) {
        std::vector<double> x(dim);
        polar_to_ab(nat[0], nat[1], kPeriodicityDays, x[0], x[1]);
        if (v == RateVariant::R1) {
            x[2] = nat[2];
            polar_to_ab(nat[3], nat[4], kPeriodicityDays, x[3], x[4]);
        }
        return objective(x);
    };
    fit.estimates = hessian_cis(nll_nat, report);
    return fit;
}

const EmpiricalBody::Band& EmpiricalBody::band_for(int month, double peak_tide) const {
    const Month& m = months[month - 1];
    if (!banded || m.bands.size() == 1) return m.bands.front();
    if (peak_tide <= m.tide_cut_lo) return m.bands[0];
    if (peak_tide <= m.tide_cut_hi) return m.bands[1];
    return m.bands[2];
}

EmpiricalBody build_body(const std::vector<TidalCycleRecord>& records,
                         const MonthlyThresholds& thresholds, bool banded) {
    EmpiricalBody body;
    body.banded = banded;
    for (int j = 0; j < 12; ++j) {
        std::vector<std::pair<double, double>> pairs;  // (tide, surge) below threshold
        std::vector<double> tides;
        for (const auto& r : records) {
            if (r.missing || r.month != j + 1) continue;
            tides.push_back(r.peak_tide);
            if (r.skew_surge <= thresholds.u[j]) pairs.emplace_back(r.peak_tide, r.skew_surge);
        }
        if (pairs.empty())
            throw std::runtime_error("empty sub-threshold body in month " + std::to_string(j + 1));
        auto& m = body.months[j];
        auto finish_band = [&](std::vector<double> surges) {
            EmpiricalBody::Band b;
            std::sort(surges.begin(), surges.end());
            b.kde_bandwidth =
                surges.size() >= 2 ? stats::silverman_bandwidth(surges) : 1e-3;
            double mass = 0.0;
            for (double y : surges)
                mass += stats::normal_cdf((thresholds.u[j] - y) / b.kde_bandwidth);
            b.kde_mass = std::max(mass / static_cast<double>(surges.size()), 1e-12);
            b.sorted = std::move(surges);
            return b;
        };
        if (!banded) {
            std::vector<double> s;
            s.reserve(pairs.size());
            for (auto& p : pairs) s.push_back(p.second);
            m.bands.push_back(finish_band(std::move(s)));
        } else {
            std::sort(tides.begin(), tides.end());
            m.tide_cut_lo = stats::quantile_sorted(tides, 1.0 / 3.0);
            m.tide_cut_hi = stats::quantile_sorted(tides, 2.0 / 3.0);
            std::vector<double> lo, mid, hi;
            for (auto& [x, y] : pairs) {
                if (x <= m.tide_cut_lo)
                    lo.push_back(y);
                else if (x <= m.tide_cut_hi)
                    mid.push_back(y);
                else
                    hi.push_back(y);
            }
            for (auto* v : {&lo, &mid, &hi})
                if (v->empty())
                    throw std::runtime_error("empty tide band in month " + std::to_string(j + 1));
            m.bands.push_back(finish_band(std::move(lo)));
            m.bands.push_back(finish_band(std::move(mid)));
            m.bands.push_back(finish_band(std::move(hi)));
        }
    }
    return body;
}

double SurgeModel::cdf(double y, const CovariateContext& ctx) const {
    const double u = thresholds.threshold(ctx.month);
    const double lam = eval_lambda(rate, rate_variant, ctx);
    if (y > u) {
        const double sigma = eval_sigma(tail, tail_spec, ctx);
        const double xi = tail_spec.per_month_shape() ? tail.xi_month[ctx.month - 1] : tail.xi;
        const double w = (y - u) / sigma;
        double surv;
        if (std::fabs(xi) < 1e-8) {
            surv = std::exp(-w);
        } else {
            const double t = 1.0 + xi * w;
            surv = t <= 0.0 ? 0.0 : std::pow(t, -1.0 / xi);
        }
        return 1.0 - lam * surv;
    }
    const auto& band = body.band_for(ctx.month, ctx.peak_tide);
    const auto it = std::upper_bound(band.sorted.begin(), band.sorted.end(), y);
    const double frac = static_cast<double>(it - band.sorted.begin()) /
                        static_cast<double>(band.sorted.size());
    return (1.0 - lam) * frac;
}

double SurgeModel::pdf(double y, const CovariateContext& ctx) const {
    const double u = thresholds.threshold(ctx.month);
    const double lam = eval_lambda(rate, rate_variant, ctx);
    if (y > u) {
        const double sigma = eval_sigma(tail, tail_spec, ctx);
        const double xi = tail_spec.per_month_shape() ? tail.xi_month[ctx.month - 1] : tail.xi;
        const double w = (y - u) / sigma;
        if (std::fabs(xi) < 1e-8) return lam / sigma * std::exp(-w);
        const double t = 1.0 + xi * w;
        if (t <= 0.0) return 0.0;
        return lam / sigma * std::pow(t, -1.0 / xi - 1.0);
    }
    // truncated-and-renormalised Gaussian KDE of the sub-threshold sample
    const auto& band = body.band_for(ctx.month, ctx.peak_tide);
    const double h = band.kde_bandwidth;
    double dens = 0.0;
    for (double yi : band.sorted) {
        const double z = (y - yi) / h;
        if (std::fabs(z) > 8.0) continue;
        dens += std::exp(-0.5 * z * z);
    }
    dens /= static_cast<double>(band.sorted.size()) * h * std::sqrt(2.0 * M_PI);
    return (1.0 - lam) * dens / band.kde_mass;
}

double SurgeModel::quantile(double p, const CovariateContext& ctx) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0,1]");
    const double u = thresholds.threshold(ctx.month);
    const double lam = eval_lambda(rate, rate_variant, ctx);
    if (p > 1.0 - lam) {
        const double sigma = eval_sigma(tail, tail_spec, ctx);
        const double xi = tail_spec.per_month_shape() ? tail.xi_month[ctx.month - 1] : tail.xi;
        const double pe = (1.0 - p) / lam;  // GPD survival probability
        if (std::fabs(xi) < 1e-8) return u - sigma * std::log(pe);
        return u + sigma / xi * (std::pow(pe, -xi) - 1.0);
    }
    const auto& band = body.band_for(ctx.month, ctx.peak_tide);
    const double v = p / (1.0 - lam);  // position within the body
    const std::size_t n = band.sorted.size();
    // tolerance keeps a one-ulp excursion of v*n above an integer from
    // selecting the next atom, so cdf -> quantile round-trips exactly
    const std::size_t idx =
        std::min(n - 1, static_cast<std::size_t>(std::max(
                            0.0, std::ceil(v * static_cast<double>(n) - 1e-9) - 1.0)));
    return band.sorted[idx];
}

double SurgeModel::support_min() const {
    double lo = kInf;
    for (const auto& m : body.months)
        for (const auto& b : m.bands)
            if (!b.sorted.empty()) lo = std::min(lo, b.sorted.front());
    return lo;
}

std::vector<Exceedance> extract_exceedances(const std::vector<TidalCycleRecord>& records,
                                            const MonthlyThresholds& th, double tide_mean,
                                            double tide_sd) {
    std::vector<Exceedance> out;
    for (const auto& r : records) {
        if (r.missing) continue;
        const double u = th.threshold(r.month);
        if (r.skew_surge > u)
            out.push_back({r.skew_surge - u, make_context(r, tide_mean, tide_sd)});
    }
    return out;
}

std::vector<RateObs> extract_rate_obs(const std::vector<TidalCycleRecord>& records,
                                      const MonthlyThresholds& th, double tide_mean,
                                      double tide_sd) {
    std::vector<RateObs> out;
    for (const auto& r : records) {
        if (r.missing) continue;
        out.push_back({r.skew_surge > th.threshold(r.month),
                       make_context(r, tide_mean, tide_sd)});
    }
    return out;
}

namespace {

std::uint64_t hash_records(const std::vector<TidalCycleRecord>& records) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (const auto& r : records) {
        mix(static_cast<std::uint64_t>(r.timestamp));
        std::uint64_t bits;
        static_assert(sizeof(double) == 8);
        std::memcpy(&bits, &r.peak_tide, 8);
        mix(bits);
        if (!r.missing) {
            std::memcpy(&bits, &r.skew_surge, 8);
            mix(bits);
        }
    }
    return h;
}

}  // namespace

SurgeFitResult fit_surge_model(const std::vector<TidalCycleRecord>& records,
                               const SurgeFitOptions& opt) {
    SurgeFitResult out;
    SurgeModel& m = out.model;
    m.thresholds = compute_thresholds(records, opt.q_u);
    tide_moments(records, m.tide_mean, m.tide_sd);
    m.body = build_body(records, m.thresholds, opt.banded_body);
    m.tail_spec.variant = opt.tail;
    m.rate_variant = opt.rate;
    m.prior = opt.prior;
    m.data_hash = hash_records(records);

    auto exc = extract_exceedances(records, m.thresholds, m.tide_mean, m.tide_sd);
    out.tail_fit = fit_tail(m.tail_spec, exc, opt.prior, opt.seed);
    m.tail = out.tail_fit.params;

    auto robs = extract_rate_obs(records, m.thresholds, m.tide_mean, m.tide_sd);
    out.rate_fit = fit_rate(opt.rate, robs, 1.0 - opt.q_u, opt.seed);
    m.rate = out.rate_fit.params;

    m.nll = out.tail_fit.nll + out.rate_fit.nll;
    m.aic = out.tail_fit.aic + out.rate_fit.aic;
    m.bic = out.tail_fit.bic + out.rate_fit.bic;
    return out;
}

SurgeFitResult fit_stationary_surge_model(const std::vector<TidalCycleRecord>& records,
                                          double q_u, std::uint64_t seed) {
    SurgeFitResult out;
    SurgeModel& m = out.model;
    tide_moments(records, m.tide_mean, m.tide_sd);
    m.data_hash = hash_records(records);

    std::vector<double> all;
    for (const auto& r : records)
        if (!r.missing) all.push_back(r.skew_surge);
    if (all.size() < 240) throw std::runtime_error("too few surges for a stationary fit");
    std::sort(all.begin(), all.end());
    const double u = stats::quantile_sorted(all, q_u);
    m.thresholds.quantile_level = q_u;
    for (int j = 0; j < 12; ++j) m.thresholds.u[j] = u;

    // pooled body shared by every month
    EmpiricalBody::Band band;
    for (double y : all)
        if (y <= u) band.sorted.push_back(y);
    band.kde_bandwidth = stats::silverman_bandwidth(band.sorted);
    double mass = 0.0;
    for (double y : band.sorted) mass += stats::normal_cdf((u - y) / band.kde_bandwidth);
    band.kde_mass = std::max(mass / static_cast<double>(band.sorted.size()), 1e-12);
    m.body.banded = false;
    for (auto& mo : m.body.months) mo.bands = {band};

    // constant GPD: represented as S2 with beta_sigma = 0
    std::vector<Exceedance> exc;
    for (const auto& r : records)
        if (!r.missing && r.skew_surge > u)
            exc.push_back({r.skew_surge - u, make_context(r, m.tide_mean, m.tide_sd)});
    double mean_excess = 0.0;
    for (const auto& e : exc) mean_excess += e.excess;
    mean_excess /= static_cast<double>(exc.size());
    auto objective = [&](const std::vector<double>& x) {
        TailParams p;
        p.alpha_sigma = x[0];
        p.xi = x[1];
        TailModelSpec s2{TailVariant::S2};
        return nll_tail(p, s2, exc);
    };
    optim::SimplexOptions so;
    so.seed = seed;
    so.step = {0.02 * std::max(mean_excess, 1e-3), 0.05};
    auto res = optim::minimize(objective, {mean_excess, 0.05}, so);
    m.tail_spec.variant = TailVariant::S2;
    m.tail.alpha_sigma = res.x[0];
    m.tail.beta_sigma = 0.0;
    m.tail.phi_sigma = 0.0;
    m.tail.xi = res.x[1];

    m.rate_variant = RateVariant::R0;
    m.rate.lambda = 1.0 - q_u;
    m.rate.beta_lambda = 0.0;
    m.rate.phi_lambda = 0.0;

    out.tail_fit.spec = m.tail_spec;
    out.tail_fit.params = m.tail;
    out.tail_fit.n = exc.size();
    out.tail_fit.nll = res.fmin;
    out.tail_fit.aic = 2.0 * 2 + 2.0 * res.fmin;
    out.tail_fit.bic = 2.0 * std::log(static_cast<double>(exc.size())) + 2.0 * res.fmin;
    m.nll = res.fmin;
    m.aic = out.tail_fit.aic;
    m.bic = out.tail_fit.bic;
    return out;
}

std::vector<RankedFit> model_select(const std::vector<FitSummary>& fits) {
    if (fits.empty()) throw std::invalid_argument("model_select: no fits");
    const std::size_t n = fits.front().n;
    for (const auto& f : fits)
        if (f.n != n) throw std::invalid_argument("model_select: fits on different data");
    std::vector<RankedFit> out;
    for (const auto& f : fits) {
        RankedFit r;
        r.fit = f;
        r.aic = 2.0 * f.k + 2.0 * f.nll;
        r.bic = f.k * std::log(static_cast<double>(f.n)) + 2.0 * f.nll;
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(),
              [](const RankedFit& a, const RankedFit& b) { return a.aic < b.aic; });
    return out;
}

bool tail_nested(TailVariant small, TailVariant big) {
    if (small == big) return false;
    if (small == TailVariant::S1 && big == TailVariant::S0) return true;
    if (small == TailVariant::S2 && (big == TailVariant::S3 || big == TailVariant::S4))
        return true;
    return false;
}

LrtResult likelihood_ratio_test(const FitSummary& small, const FitSummary& big) {
    if (small.n != big.n)
        throw std::invalid_argument("likelihood_ratio_test: fits on different data");
    if (big.k <= small.k)
        throw std::invalid_argument("likelihood_ratio_test: models are not nested");
    LrtResult r;
    r.statistic = 2.0 * (small.nll - big.nll);
    r.df = big.k - small.k;
    r.p_value = stats::chi2_sf(std::max(r.statistic, 0.0), r.df);
    return r;
}

}  // namespace sealevel
