#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace sealevel {

// Runs estimate of the extremal index at level y with run length r:
// exceedance clusters separated by at least r consecutive non-exceedances.
struct RunsEstimate {
    double theta = 1.0;       // (#clusters) / (#exceedances)
    std::size_t clusters = 0; // c(y, r)
    std::size_t exceedances = 0;
};

RunsEstimate theta_runs(const std::vector<double>& surges, double y, std::size_t r);

// Ferro-Segers intervals estimator from interexceedance times, clamped to
// (0, 1]. Needs at least 2 exceedances.
double theta_intervals(const std::vector<double>& surges, double y);

// Subasymptotic extremal-index curve: empirical runs estimates on a level
// grid below the threshold v, an exponential approach to the asymptote
// theta above it.
struct ExiModel {
    std::size_t run_length = 2;   // r, cycles
    double v = 0.0;               // metres
    double theta_v = 1.0;         // runs estimate at v
    double theta = 1.0;           // asymptote, in [theta_v, 1]
    double psi = 1.0;             // decay scale, metres, > 0
    std::vector<double> grid_y;       // regular grid, y_F .. y_max
    std::vector<double> grid_theta;   // runs estimates on the grid
    std::vector<std::size_t> grid_clusters;  // c(y, r) per grid point

    double eval(double y) const;  // theta-hat(y, r)
};

struct ExiGridSpec {
    std::size_t points = 200;
};

struct ExiCurvePoint {
    double y = 0.0;        // level, > v
    double theta = 0.0;    // runs estimate at y
    double weight2 = 1.0;  // squared WLS weight, c(y,r) - 1
};

// Weighted least squares fit of (theta, psi) to runs estimates above v,
// anchored at theta(v) = theta_v. Needs at least 5 points.
std::pair<double, double> fit_exi_curve(const std::vector<ExiCurvePoint>& pts, double v,
                                        double theta_v, std::uint64_t seed = 0);

// Weighted least squares fit of (theta, psi) over grid points above v with
// weight sqrt(c(y,r) - 1). v defaults to the 0.99 quantile when negative.
ExiModel fit_exi_model(const std::vector<double>& surges, std::size_t r, double v = -1.0,
                       ExiGridSpec grid = {}, std::uint64_t seed = 0);

}  // namespace sealevel
