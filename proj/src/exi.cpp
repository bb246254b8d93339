#include "sealevel/exi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "sealevel/optim.hpp"
#include "sealevel/stats.hpp"

namespace sealevel {

RunsEstimate theta_runs(const std::vector<double>& surges, double y, std::size_t r) {
    RunsEstimate out;
    out.clusters = 0;
    out.exceedances = 0;
    std::size_t gap = r;  // treat the start as a long gap
    for (double s : surges) {
        if (s > y) {
            if (gap >= r) ++out.clusters;
            ++out.exceedances;
            gap = 0;
        } else {
            ++gap;
        }
    }
    if (out.exceedances == 0)
        throw std::runtime_error("theta_runs: no exceedances of y = " + std::to_string(y));
    out.theta = static_cast<double>(out.clusters) / static_cast<double>(out.exceedances);
    return out;
}

double theta_intervals(const std::vector<double>& surges, double y) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < surges.size(); ++i)
        if (surges[i] > y) idx.push_back(i);
    const std::size_t n = idx.size();
    if (n < 2) throw std::runtime_error("theta_intervals: fewer than 2 exceedances");
    std::vector<double> t(n - 1);
    double tmax = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        t[i] = static_cast<double>(idx[i + 1] - idx[i]);
        tmax = std::max(tmax, t[i]);
    }
    double theta;
    if (tmax <= 2.0) {
        double s1 = 0.0, s2 = 0.0;
        for (double ti : t) {
            s1 += ti;
            s2 += ti * ti;
        }
        theta = 2.0 * s1 * s1 / (static_cast<double>(n - 1) * s2);
    } else {
        double s1 = 0.0, s2 = 0.0;
        for (double ti : t) {
            s1 += ti - 1.0;
            s2 += (ti - 1.0) * (ti - 2.0);
        }
        theta = 2.0 * s1 * s1 / (static_cast<double>(n - 1) * s2);
    }
    return std::clamp(theta, 1e-12, 1.0);
}

double ExiModel::eval(double y) const {
    if (y > v) return theta - (theta - theta_v) * std::exp(-(y - v) / psi);
    if (grid_y.empty()) return theta_v;
    if (y <= grid_y.front()) return grid_theta.front();
    if (y >= grid_y.back()) {
        // grid extends past v; on (v, y_max] callers take the branch above,
        // so this only covers y == v with v at the grid end
        return grid_theta.back();
    }
    const auto it = std::upper_bound(grid_y.begin(), grid_y.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - grid_y.begin());
    const double x0 = grid_y[i - 1], x1 = grid_y[i];
    const double f0 = grid_theta[i - 1], f1 = grid_theta[i];
    return f0 + (f1 - f0) * (y - x0) / (x1 - x0);
}

ExiModel fit_exi_model(const std::vector<double>& surges, std::size_t r, double v,
                       ExiGridSpec grid, std::uint64_t seed) {
    if (grid.points < 10) throw std::invalid_argument("fit_exi_model: grid too small");
    std::vector<double> sorted = surges;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() < 20) throw std::invalid_argument("fit_exi_model: too few surges");
    if (v < 0.0) v = stats::quantile_sorted(sorted, 0.99);
    const double y_f = sorted.front();
    const double y_max = sorted.back();
    if (!(v > y_f && v < y_max))
        throw std::runtime_error("fit_exi_model: threshold v outside the surge range");

    ExiModel m;
    m.run_length = r;
    m.v = v;
    m.grid_y.resize(grid.points);
    m.grid_theta.resize(grid.points);
    m.grid_clusters.resize(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) {
        // keep the top grid point a hair below the maximum so it has an exceedance
        const double frac = static_cast<double>(i) / static_cast<double>(grid.points - 1);
        double y = y_f + frac * (y_max - y_f);
        if (i + 1 == grid.points || y >= y_max)
            y = std::nextafter(y_max, std::numeric_limits<double>::lowest());
        m.grid_y[i] = y;
        const auto est = theta_runs(surges, y, r);
        m.grid_theta[i] = est.theta;
        m.grid_clusters[i] = est.clusters;
    }
    m.theta_v = theta_runs(surges, v, r).theta;

    std::vector<ExiCurvePoint> pts;
    for (std::size_t i = 0; i < grid.points; ++i) {
        if (m.grid_y[i] <= v) continue;
        const double c = static_cast<double>(m.grid_clusters[i]);
        if (c < 2.0) continue;  // weight sqrt(c-1) vanishes at c=1
        pts.push_back({m.grid_y[i], m.grid_theta[i], c - 1.0});
    }
    std::tie(m.theta, m.psi) = fit_exi_curve(pts, v, m.theta_v, seed);
    return m;
}

std::pair<double, double> fit_exi_curve(const std::vector<ExiCurvePoint>& pts, double v,
                                        double theta_v, std::uint64_t seed) {
    if (pts.size() < 5)
        throw std::runtime_error("fit_exi_curve: fewer than 5 weighted points above v");

    // theta in [theta_v, 1] via logit, psi > 0 via log
    const double lo = theta_v;
    auto unpack = [&](const std::vector<double>& x, double& theta, double& psi) {
        const double s = 1.0 / (1.0 + std::exp(-x[0]));
        theta = lo + (1.0 - lo) * s;
        psi = std::exp(x[1]);
    };
    auto objective = [&](const std::vector<double>& x) {
        double theta, psi;
        unpack(x, theta, psi);
        double sse = 0.0;
        for (const auto& p : pts) {
            const double fit = theta - (theta - lo) * std::exp(-(p.y - v) / psi);
            sse += p.weight2 * (p.theta - fit) * (p.theta - fit);
        }
        return sse;
    };

    optim::SimplexOptions opt;
    opt.seed = seed;
    opt.restarts = 6;
    opt.jitter = 0.3;
    opt.step = {0.5, 0.5};
    opt.max_iter = 4000;
    opt.f_tol = 1e-18;
    opt.x_tol = 1e-12;
    auto res = optim::minimize(objective, {2.0, std::log(0.25)}, opt);
    double theta, psi;
    unpack(res.x, theta, psi);
    return {theta, psi};
}

}  // namespace sealevel
