#include "sealevel/maxima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace sealevel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CovariateContext sample_context(const SurgeModel& surge, int month,
                                const TidalSampleSet::MonthSample& ms, std::size_t i) {
    CovariateContext ctx;
    ctx.month = month;
    ctx.day_of_year = ms.day_of_year[i];
    ctx.day_of_month = ms.day_of_month[i];
    ctx.mean_day_of_month = mean_day_of_month(month);
    ctx.peak_tide = ms.peak_tides[i];
    ctx.tide_mean = surge.tide_mean;
    ctx.tide_sd = surge.tide_sd;
    return ctx;
}

// Sum over month-j cycles of year k of theta * log F(z - x); -inf when any
// factor vanishes.
double month_log_cdf(const VariantSpec& spec, const TidalSampleSet::YearSample& year, int month,
                     double z) {
    const auto& ms = year.months[month - 1];
    double acc = 0.0;
    for (std::size_t i = 0; i < ms.peak_tides.size(); ++i) {
        const double y = z - ms.peak_tides[i];
        const double f = spec.surge.cdf(y, sample_context(spec.surge, month, ms, i));
        if (f <= 0.0) return -kInf;
        double lf = std::log(f);
        if (spec.uses_theta() && spec.exi) lf *= spec.exi->eval(y);
        acc += lf;
    }
    return acc;
}

}  // namespace

const char* to_string(Variant v) {
    switch (v) {
        case Variant::current: return "current";
        case Variant::baseline: return "baseline";
        case Variant::seasonal_surge: return "seasonal_surge";
        case Variant::seasonal_tide: return "seasonal_tide";
        case Variant::full_seasonal: return "full_seasonal";
        case Variant::interaction: return "interaction";
        case Variant::temporal_dependence: return "temporal_dependence";
    }
    return "?";
}

Variant variant_from_string(const std::string& s) {
    for (Variant v :
         {Variant::current, Variant::baseline, Variant::seasonal_surge, Variant::seasonal_tide,
          Variant::full_seasonal, Variant::interaction, Variant::temporal_dependence})
        if (s == to_string(v)) return v;
    throw std::invalid_argument("unknown variant: " + s);
}

void VariantSpec::validate() const {
    if (tides.K() == 0) throw std::invalid_argument("variant has no tidal samples");
    if (variant == Variant::interaction || variant == Variant::temporal_dependence) {
        if (!surge.tide_in_scale() && !surge.tide_in_rate())
            throw std::invalid_argument(
                std::string(to_string(variant)) + " requires a tide covariate in the surge model");
    }
    if (variant == Variant::temporal_dependence && !exi)
        throw std::invalid_argument("temporal_dependence requires an extremal-index model");
}

double monthly_max_cdf(const VariantSpec& spec, int month, double z) {
    if (month < 1 || month > 12) throw std::invalid_argument("month out of range");
    const std::size_t K = spec.tides.K();
    if (spec.geometric_over_years()) {
        double mean_log = 0.0;
        for (const auto& year : spec.tides.years) {
            const double l = month_log_cdf(spec, year, month, z);
            if (l == -kInf) return 0.0;
            mean_log += l / static_cast<double>(K);
        }
        return std::exp(mean_log);
    }
    double acc = 0.0;
    for (const auto& year : spec.tides.years) {
        const double l = month_log_cdf(spec, year, month, z);
        if (l != -kInf) acc += std::exp(l);
    }
    return acc / static_cast<double>(K);
}

double annual_max_cdf(const VariantSpec& spec, double z) {
    const std::size_t K = spec.tides.K();
    if (spec.geometric_over_years()) {
        double mean_log = 0.0;
        for (const auto& year : spec.tides.years) {
            double l = 0.0;
            for (int j = 1; j <= 12; ++j) l += month_log_cdf(spec, year, j, z);
            if (l == -kInf) return 0.0;
            mean_log += l / static_cast<double>(K);
        }
        return std::exp(mean_log);
    }
    double acc = 0.0;
    for (const auto& year : spec.tides.years) {
        double l = 0.0;
        for (int j = 1; j <= 12; ++j) l += month_log_cdf(spec, year, j, z);
        if (l != -kInf) acc += std::exp(l);
    }
    return acc / static_cast<double>(K);
}

double year_specific_cdf(const VariantSpec& spec, std::size_t k, double z) {
    if (k >= spec.tides.K()) throw std::invalid_argument("year index out of range");
    double l = 0.0;
    for (int j = 1; j <= 12; ++j) l += month_log_cdf(spec, spec.tides.years[k], j, z);
    return l == -kInf ? 0.0 : std::exp(l);
}

namespace {

double spec_cdf(const VariantSpec& spec, std::optional<int> month,
                std::optional<std::size_t> year, double z) {
    if (year) return year_specific_cdf(spec, *year, z);
    if (month) return monthly_max_cdf(spec, *month, z);
    return annual_max_cdf(spec, z);
}

}  // namespace

double return_level(const VariantSpec& spec, double p, std::optional<int> month,
                    std::optional<std::size_t> year) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0,1)");
    spec.validate();
    const double target = 1.0 - p;

    double min_tide = kInf, max_tide = -kInf;
    for (const auto& ys : spec.tides.years)
        for (const auto& ms : ys.months)
            for (double x : ms.peak_tides) {
                min_tide = std::min(min_tide, x);
                max_tide = std::max(max_tide, x);
            }
    double u_max = -kInf, sigma_max = 0.0;
    for (int j = 1; j <= 12; ++j) u_max = std::max(u_max, spec.surge.thresholds.threshold(j));
    {
        // scale bound over the seasonal cycle (and months for S0/S1)
        const auto& t = spec.surge.tail;
        if (spec.surge.tail_spec.per_month_scale())
            for (double s : t.sigma_month) sigma_max = std::max(sigma_max, s);
        else
            sigma_max = t.alpha_sigma + t.beta_sigma + t.beta_sigma2 +
                        std::fabs(t.gamma_sigma_x) * std::max(std::fabs(min_tide),
                                                              std::fabs(max_tide));
    }

    double lo = min_tide + spec.surge.support_min() - 1e-6;
    double hi = max_tide + u_max + 50.0 * std::max(sigma_max, 0.01);
    if (spec_cdf(spec, month, year, lo) > target)
        throw std::runtime_error(
            "return period too short for the discrete surge body; use empirical estimates");
    double width = hi - lo;
    int expand = 0;
    while (spec_cdf(spec, month, year, hi) < target) {
        if (++expand > 60)
            throw std::runtime_error("return level bracket expansion failed");
        width *= 2.0;
        hi += width;
    }
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if (spec_cdf(spec, month, year, mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    const double z = hi;
    if (spec_cdf(spec, month, year, z) > target + 1e-2 && target > 0.5)
        throw std::runtime_error(
            "return period too short for the discrete surge body; use empirical estimates");
    return z;
}

ReturnLevelCurve return_level_curve(const VariantSpec& spec, const std::vector<double>& ps,
                                    std::optional<int> month, std::optional<std::size_t> year) {
    ReturnLevelCurve curve;
    curve.variant = spec.variant;
    curve.month = month;
    curve.year = year;
    for (double p : ps) curve.points.push_back({p, return_level(spec, p, month, year)});
    return curve;
}

ReturnLevelCurve empirical_return_levels(std::vector<double> maxima) {
    if (maxima.size() < 1) throw std::invalid_argument("no maxima");
    std::sort(maxima.begin(), maxima.end(), std::greater<>());
    ReturnLevelCurve curve;
    const double n1 = static_cast<double>(maxima.size() + 1);
    for (std::size_t i = 0; i < maxima.size(); ++i)
        curve.points.push_back({static_cast<double>(i + 1) / n1, maxima[i]});
    return curve;
}

std::vector<double> extract_annual_maxima(const std::vector<TidalCycleRecord>& records,
                                          std::size_t min_cycles) {
    std::map<int, std::pair<double, std::size_t>> by_year;  // (max level, count)
    for (const auto& r : records) {
        if (r.missing) continue;
        const int y = epoch_to_calendar(r.timestamp).year;
        auto& e = by_year.try_emplace(y, -kInf, 0).first->second;
        e.first = std::max(e.first, r.sea_level());
        ++e.second;
    }
    std::vector<double> out;
    for (const auto& [y, e] : by_year)
        if (e.second >= min_cycles) out.push_back(e.first);
    return out;
}

std::vector<double> extract_monthly_maxima(const std::vector<TidalCycleRecord>& records,
                                           int month, std::size_t min_cycles) {
    std::map<int, std::pair<double, std::size_t>> by_year;
    for (const auto& r : records) {
        if (r.missing || r.month != month) continue;
        const int y = epoch_to_calendar(r.timestamp).year;
        auto& e = by_year.try_emplace(y, -kInf, 0).first->second;
        e.first = std::max(e.first, r.sea_level());
        ++e.second;
    }
    std::vector<double> out;
    for (const auto& [y, e] : by_year)
        if (e.second >= min_cycles) out.push_back(e.first);
    return out;
}

std::array<double, 12> month_occurrence_profile(const VariantSpec& spec, double z) {
    std::array<double, 12> mean{};
    std::size_t used = 0;
    for (const auto& year : spec.tides.years) {
        std::array<double, 12> a{};
        double total = 0.0;
        for (int j = 1; j <= 12; ++j) {
            const auto& ms = year.months[j - 1];
            double acc = 0.0;
            for (std::size_t i = 0; i < ms.peak_tides.size(); ++i) {
                const double y = z - ms.peak_tides[i];
                const auto ctx = sample_context(spec.surge, j, ms, i);
                const double f = spec.surge.pdf(y, ctx);
                if (f <= 0.0) continue;
                const double F = spec.surge.cdf(y, ctx);
                if (F <= 0.0) continue;
                const double theta = spec.exi ? spec.exi->eval(y) : 1.0;
                acc += f * theta / F;
            }
            a[j - 1] = acc;
            total += acc;
        }
        if (total <= 0.0) continue;
        for (int j = 0; j < 12; ++j) mean[j] += a[j] / total;
        ++used;
    }
    if (used == 0)
        throw std::runtime_error("month occurrence undefined: z below every month's support");
    for (auto& v : mean) v /= static_cast<double>(used);
    return mean;
}

double month_occurrence_prob(const VariantSpec& spec, int month, double z) {
    if (month < 1 || month > 12) throw std::invalid_argument("month out of range");
    return month_occurrence_profile(spec, z)[month - 1];
}

}  // namespace sealevel
