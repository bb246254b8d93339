#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sealevel::stats {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased
double sd(std::span<const double> x);

// Empirical quantile with linear interpolation between order statistics
// (the "type-7" rule). Input must be sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);
double quantile(std::vector<double> x, double p);

double normal_cdf(double z);
double normal_quantile(double p);

// Regularized incomplete beta and gamma functions.
double incbeta(double a, double b, double x);
double gamma_p(double a, double x);

// Two-sided p-value for a t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

// Upper-tail chi-square probability.
double chi2_sf(double x, double df);

// One-sample Kolmogorov-Smirnov statistic against Uniform(0,1); input need
// not be sorted. All values must lie in [0,1].
double ks_statistic_uniform(std::vector<double> u);

// P(D_n >= d): exact (Marsaglia-Tsang-Wang) for n <= 35, else the
// asymptotic Kolmogorov series.
double ks_p_value(double d, std::size_t n);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
KsResult ks_test_uniform(std::vector<double> u);

// Scholz-Stephens two-sample Anderson-Darling test. P-values come from the
// standard asymptotic interpolation, extended monotonically and clamped to
// [0,1]; both samples need >= 5 points.
struct AdResult {
    double statistic = 0.0;   // standardized (A2 - 1)/sigma
    double p_value = 1.0;
};
AdResult ad_two_sample(std::vector<double> a, std::vector<double> b);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double p_value = 1.0;  // two-sided t-test of slope = 0
};
LinearFit ols_line(std::span<const double> x, std::span<const double> y);

// Silverman's rule-of-thumb bandwidth for a Gaussian kernel.
double silverman_bandwidth(std::span<const double> x);

// Lag-tau autocorrelation, ignoring NaNs pairwise.
double acf(std::span<const double> x, std::size_t tau);

}  // namespace sealevel::stats
