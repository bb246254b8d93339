#include "sealevel/records.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sealevel/stats.hpp"

namespace sealevel {

CovariateContext make_context(const TidalCycleRecord& rec, double tide_mean, double tide_sd) {
    CovariateContext ctx;
    ctx.day_of_year = rec.day_of_year;
    ctx.day_of_month = rec.day_of_month;
    ctx.mean_day_of_month = mean_day_of_month(rec.month);
    ctx.month = rec.month;
    ctx.peak_tide = rec.peak_tide;
    ctx.tide_mean = tide_mean;
    ctx.tide_sd = tide_sd;
    return ctx;
}

namespace {

void fill_covariates(TidalCycleRecord& r, int first_year) {
    CalendarInfo c = epoch_to_calendar(r.timestamp);
    r.year_index = c.year - first_year + 1;
    r.month = c.month;
    r.day_of_year = c.day_of_year;
    r.day_of_month = c.day_of_month;
}

}  // namespace

std::vector<TidalCycleRecord> parse_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty input");
    // tolerate a UTF-8 BOM and trailing CR
    if (line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,peak_tide,skew_surge")
        throw std::runtime_error("expected header 'timestamp,peak_tide,skew_surge', got '" +
                                 line + "'");
    std::vector<TidalCycleRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string ts, tide, surge;
        if (!std::getline(ss, ts, ',') || !std::getline(ss, tide, ','))
            throw std::runtime_error("line " + std::to_string(lineno) + ": malformed row");
        std::getline(ss, surge, ',');
        TidalCycleRecord r;
        try {
            r.timestamp = parse_iso8601(ts);
            std::size_t pos = 0;
            r.peak_tide = std::stod(tide, &pos);
            if (pos != tide.size()) throw std::invalid_argument("trailing junk");
            if (surge.empty()) {
                r.missing = true;
                r.skew_surge = std::numeric_limits<double>::quiet_NaN();
            } else {
                r.skew_surge = std::stod(surge, &pos);
                if (pos != surge.size()) throw std::invalid_argument("trailing junk");
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!out.empty() && r.timestamp <= out.back().timestamp)
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": timestamps not strictly increasing");
        out.push_back(r);
    }
    if (out.empty()) throw std::runtime_error("no data rows");
    const int first_year = epoch_to_calendar(out.front().timestamp).year;
    for (auto& r : out) fill_covariates(r, first_year);
    return out;
}

std::vector<TidalCycleRecord> parse_records_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_records(in);
}

void write_records_csv(std::ostream& out, const std::vector<TidalCycleRecord>& records) {
    out << "timestamp,peak_tide,skew_surge\n";
    char buf[64];
    for (const auto& r : records) {
        out << format_iso8601(r.timestamp) << ',';
        std::snprintf(buf, sizeof(buf), "%.6f", r.peak_tide);
        out << buf << ',';
        if (!r.missing) {
            std::snprintf(buf, sizeof(buf), "%.6f", r.skew_surge);
            out << buf;
        }
        out << '\n';
    }
}

MonthlyThresholds compute_thresholds(const std::vector<TidalCycleRecord>& records, double q_u) {
    if (q_u <= 0.0 || q_u >= 1.0) throw std::invalid_argument("q_u must be in (0,1)");
    std::vector<double> by_month[12];
    for (const auto& r : records)
        if (!r.missing) by_month[r.month - 1].push_back(r.skew_surge);
    MonthlyThresholds th;
    th.quantile_level = q_u;
    for (int j = 0; j < 12; ++j) {
        if (by_month[j].size() < 20)
            throw std::runtime_error("month " + std::to_string(j + 1) +
                                     " has fewer than 20 surge observations");
        std::sort(by_month[j].begin(), by_month[j].end());
        th.u[j] = stats::quantile_sorted(by_month[j], q_u);
        th.exceedance_count[j] = static_cast<int>(
            by_month[j].end() - std::upper_bound(by_month[j].begin(), by_month[j].end(), th.u[j]));
    }
    return th;
}

namespace {

// Collects one calendar year's cycles as a yearly sample; returns nullopt
// if a peak-tide gap longer than one cycle makes the year unusable.
std::optional<TidalSampleSet::YearSample> collect_year(
    const std::vector<TidalCycleRecord>& records, std::size_t begin, std::size_t end) {
    TidalSampleSet::YearSample ys;
    ys.source_year = epoch_to_calendar(records[begin].timestamp).year;
    std::int64_t prev_ts = 0;
    bool have_prev = false;
    for (std::size_t i = begin; i < end; ++i) {
        const auto& r = records[i];
        if (have_prev) {
            const std::int64_t gap = r.timestamp - prev_ts;
            if (gap > 2 * kTidalCycleSeconds + kCycleToleranceSeconds)
                return std::nullopt;  // more than one absent cycle
            if (gap > kTidalCycleSeconds + kCycleToleranceSeconds) {
                // one absent cycle: interpolate its peak tide
                TidalCycleRecord fake;
                fake.timestamp = prev_ts + kTidalCycleSeconds;
                fake.peak_tide = 0.5 * (records[i - 1].peak_tide + r.peak_tide);
                CalendarInfo c = epoch_to_calendar(fake.timestamp);
                auto& m = ys.months[c.month - 1];
                m.peak_tides.push_back(fake.peak_tide);
                m.day_of_year.push_back(c.day_of_year);
                m.day_of_month.push_back(c.day_of_month);
            }
        }
        auto& m = ys.months[r.month - 1];
        m.peak_tides.push_back(r.peak_tide);
        m.day_of_year.push_back(r.day_of_year);
        m.day_of_month.push_back(r.day_of_month);
        prev_ts = r.timestamp;
        have_prev = true;
    }
    // a usable year must cover most of its cycles
    if (ys.total_cycles() < 650) return std::nullopt;
    return ys;
}

}  // namespace

TidalSampleSet build_tidal_samples(const std::vector<TidalCycleRecord>& records, std::size_t K,
                                   SamplePolicy policy) {
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    if (records.empty()) throw std::invalid_argument("no records");
    // group record indices by calendar year
    std::map<int, std::pair<std::size_t, std::size_t>> spans;  // year -> [begin,end)
    for (std::size_t i = 0; i < records.size(); ++i) {
        const int y = epoch_to_calendar(records[i].timestamp).year;
        auto it = spans.find(y);
        if (it == spans.end())
            spans[y] = {i, i + 1};
        else
            it->second.second = i + 1;
    }
    std::vector<TidalSampleSet::YearSample> usable;
    for (const auto& [year, span] : spans) {
        auto ys = collect_year(records, span.first, span.second);
        if (ys) usable.push_back(std::move(*ys));
    }
    if (usable.empty())
        throw std::runtime_error("no complete tidal years available (span covers " +
                                 std::to_string(spans.size()) + " calendar years)");
    TidalSampleSet set;
    if (policy == SamplePolicy::repeat_single_year) {
        for (std::size_t k = 0; k < K; ++k) set.years.push_back(usable.front());
    } else {
        if (usable.size() < K)
            throw std::runtime_error("requested K=" + std::to_string(K) + " yearly samples but only " +
                                     std::to_string(usable.size()) + " complete years available");
        set.years.assign(usable.begin(), usable.begin() + static_cast<std::ptrdiff_t>(K));
    }
    return set;
}

DetrendResult detrend_linear(const std::vector<TidalCycleRecord>& records) {
    std::map<int, std::pair<double, std::size_t>> annual;  // year -> (sum, n)
    for (const auto& r : records) {
        if (r.missing) continue;
        const int y = epoch_to_calendar(r.timestamp).year;
        annual[y].first += r.skew_surge;
        annual[y].second += 1;
    }
    if (annual.size() < 2) throw std::runtime_error("detrend needs >= 2 years of data");
    std::vector<double> xs, ys;
    for (const auto& [y, sn] : annual) {
        if (sn.second == 0) continue;
        xs.push_back(static_cast<double>(y));
        ys.push_back(sn.first / static_cast<double>(sn.second));
    }
    const auto fit = stats::ols_line(xs, ys);
    DetrendResult out;
    out.slope_per_year = fit.slope;
    out.records = records;
    const double t0 = stats::mean(xs);
    for (auto& r : out.records) {
        if (r.missing) continue;
        CalendarInfo c = epoch_to_calendar(r.timestamp);
        const double t = static_cast<double>(c.year) +
                         (static_cast<double>(c.day_of_year) - 0.5) / kPeriodicityDays;
        r.skew_surge -= fit.slope * (t - t0);
    }
    return out;
}

RecenterResult recenter_annual_means(const std::vector<TidalCycleRecord>& records,
                                     std::size_t min_count) {
    std::map<int, std::pair<double, std::size_t>> annual;
    for (const auto& r : records) {
        if (r.missing) continue;
        const int y = epoch_to_calendar(r.timestamp).year;
        annual[y].first += r.skew_surge;
        annual[y].second += 1;
    }
    RecenterResult out;
    out.records = records;
    for (auto& r : out.records) {
        if (r.missing) continue;
        const int y = epoch_to_calendar(r.timestamp).year;
        const auto& sn = annual[y];
        if (sn.second >= min_count) r.skew_surge -= sn.first / static_cast<double>(sn.second);
    }
    for (const auto& [y, sn] : annual)
        if (sn.second < min_count) out.skipped_years.push_back(y);
    return out;
}

void tide_moments(const std::vector<TidalCycleRecord>& records, double& mean_out,
                  double& sd_out) {
    std::vector<double> x;
    x.reserve(records.size());
    for (const auto& r : records) x.push_back(r.peak_tide);
    mean_out = stats::mean(x);
    sd_out = stats::sd(x);
    if (sd_out <= 0.0) throw std::runtime_error("peak tide standard deviation is zero");
}

}  // namespace sealevel
