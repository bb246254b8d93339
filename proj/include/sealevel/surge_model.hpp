#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sealevel/records.hpp"

namespace sealevel {

// --- Tail (GPD) models ----------------------------------------------------

enum class TailVariant { S0, S1, S2, S3, S4 };

const char* to_string(TailVariant v);
TailVariant tail_variant_from_string(const std::string& s);

struct TailModelSpec {
    TailVariant variant = TailVariant::S2;

    bool per_month_scale() const {
        return variant == TailVariant::S0 || variant == TailVariant::S1;
    }
    bool per_month_shape() const { return variant == TailVariant::S0; }
    bool second_harmonic() const { return variant == TailVariant::S3; }
    bool tide_in_scale() const { return variant == TailVariant::S4; }
    int param_count() const;
};

struct TailParams {
    // harmonic parameterisation (S2-S4)
    double alpha_sigma = 0.0;   // metres
    double beta_sigma = 0.0;    // metres, >= 0
    double phi_sigma = 0.0;     // days in [0,365)
    double beta_sigma2 = 0.0;   // S3 second harmonic
    double phi_sigma2 = 0.0;
    double gamma_sigma_x = 0.0; // S4, metres of sigma per metre of tide
    double xi = 0.0;            // shape, > -1
    // monthly parameterisation (S0/S1)
    std::array<double, 12> sigma_month{};
    std::array<double, 12> xi_month{};
};

// Scale sigma_{d,x} for the given covariates; throws if the parameter
// region is invalid (sigma <= 0).
double eval_sigma(const TailParams& p, const TailModelSpec& spec, const CovariateContext& ctx);

struct Exceedance {
    double excess = 0.0;   // y - u_j, > 0
    CovariateContext ctx;
};

// Negative log-likelihood of the GPD tail. Support violations contribute
// +inf (the point is rejected, no exception). |xi| < 1e-8 switches to the
// exponential limit.
double nll_tail(const TailParams& p, const TailModelSpec& spec,
                const std::vector<Exceedance>& data);

struct ShapePrior {
    double mean = 0.0119;
    double sd = 0.0343;
};

struct ParamEstimate {
    std::string name;
    double value = 0.0;
    double lo95 = 0.0;
    double hi95 = 0.0;
};

struct TailFit {
    TailModelSpec spec;
    TailParams params;
    double nll = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t n = 0;
    std::vector<ParamEstimate> estimates;  // Hessian-based 95% CIs
};

// Penalised maximum likelihood fit via multi-start simplex search. Phase
// parameters are optimised on the circle (a,b) = beta*(cos,sin)(2*pi*phi/f)
// and reported back as (beta, phi). Throws on non-convergence.
TailFit fit_tail(const TailModelSpec& spec, const std::vector<Exceedance>& data,
                 std::optional<ShapePrior> prior = std::nullopt, std::uint64_t seed = 0);

// --- Exceedance-rate models ----------------------------------------------

enum class RateVariant { R0, R1 };

const char* to_string(RateVariant v);
RateVariant rate_variant_from_string(const std::string& s);

struct RateParams {
    double lambda = 0.05;        // mean monthly exceedance rate (1 - q_u)
    double beta_lambda = 0.0;    // logit units per day-offset
    double phi_lambda = 0.0;     // days
    double alpha_lambda_x = 0.0; // logit units per standardised tide (R1)
    double beta_lambda_x = 0.0;
    double phi_lambda_x = 0.0;
};

double eval_lambda(const RateParams& p, RateVariant v, const CovariateContext& ctx);

struct RateObs {
    bool exceeded = false;
    CovariateContext ctx;
};

struct RateFit {
    RateVariant variant = RateVariant::R0;
    RateParams params;
    double nll = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t n = 0;
    std::vector<ParamEstimate> estimates;
};

// Bernoulli GLM with the logit link; g(lambda) is fixed at logit(1 - q_u).
// Throws on complete separation (a single response class).
RateFit fit_rate(RateVariant v, const std::vector<RateObs>& data, double lambda,
                 std::uint64_t seed = 0);

// --- Empirical body -------------------------------------------------------

struct EmpiricalBody {
    struct Band {
        std::vector<double> sorted;       // below-threshold surges, ascending
        double kde_bandwidth = 0.0;       // Gaussian kernel, Silverman rule
        double kde_mass = 1.0;            // KDE mass at or below u_j
    };
    struct Month {
        std::vector<Band> bands;          // 1 band, or 3 tide-banded
        double tide_cut_lo = 0.0;         // x_{0.33}^{(j)}
        double tide_cut_hi = 0.0;         // x_{0.67}^{(j)}
    };
    std::array<Month, 12> months;
    bool banded = false;

    const Band& band_for(int month, double peak_tide) const;
};

EmpiricalBody build_body(const std::vector<TidalCycleRecord>& records,
                         const MonthlyThresholds& thresholds, bool banded);

// --- Composite skew-surge model ------------------------------------------

struct SurgeModel {
    MonthlyThresholds thresholds;
    EmpiricalBody body;
    TailModelSpec tail_spec;
    TailParams tail;
    RateVariant rate_variant = RateVariant::R0;
    RateParams rate;
    double tide_mean = 0.0;
    double tide_sd = 1.0;
    double nll = 0.0;   // tail + rate
    double aic = 0.0;
    double bic = 0.0;
    std::optional<ShapePrior> prior;
    std::uint64_t data_hash = 0;

    bool tide_in_scale() const { return tail_spec.tide_in_scale(); }
    bool tide_in_rate() const { return rate_variant == RateVariant::R1; }

    // Piecewise CDF: rescaled empirical body below u_j, GPD tail above.
    double cdf(double y, const CovariateContext& ctx) const;
    // Kernel density below the threshold, lambda * GPD density above.
    double pdf(double y, const CovariateContext& ctx) const;
    // Generalized inverse; body values map to the nearest empirical atom.
    double quantile(double u, const CovariateContext& ctx) const;

    // Support bounds across all months (body minimum, +inf for xi >= 0).
    double support_min() const;
};

struct SurgeFitOptions {
    double q_u = 0.95;
    TailVariant tail = TailVariant::S2;
    RateVariant rate = RateVariant::R0;
    bool banded_body = false;
    std::optional<ShapePrior> prior;
    std::uint64_t seed = 0;
};

struct SurgeFitResult {
    SurgeModel model;
    TailFit tail_fit;
    RateFit rate_fit;
};

SurgeFitResult fit_surge_model(const std::vector<TidalCycleRecord>& records,
                               const SurgeFitOptions& opt);

// Stationary composite model: pooled threshold/body, constant GPD and rate.
// Used by the non-seasonal maxima variants.
SurgeFitResult fit_stationary_surge_model(const std::vector<TidalCycleRecord>& records,
                                          double q_u = 0.95, std::uint64_t seed = 0);

// Exceedance/rate observation extraction shared by fitting and bootstrap.
std::vector<Exceedance> extract_exceedances(const std::vector<TidalCycleRecord>& records,
                                            const MonthlyThresholds& th, double tide_mean,
                                            double tide_sd);
std::vector<RateObs> extract_rate_obs(const std::vector<TidalCycleRecord>& records,
                                      const MonthlyThresholds& th, double tide_mean,
                                      double tide_sd);

// --- Model comparison -----------------------------------------------------

struct FitSummary {
    std::string name;
    int k = 0;           // parameter count
    double nll = 0.0;
    std::size_t n = 0;
};

struct RankedFit {
    FitSummary fit;
    double aic = 0.0;
    double bic = 0.0;
};

struct LrtResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

std::vector<RankedFit> model_select(const std::vector<FitSummary>& fits);
bool tail_nested(TailVariant small, TailVariant big);
LrtResult likelihood_ratio_test(const FitSummary& small, const FitSummary& big);

}  // namespace sealevel
