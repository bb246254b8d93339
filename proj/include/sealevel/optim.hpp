#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace sealevel::optim {

struct SimplexOptions {
    std::size_t max_iter = 2000;
    double f_tol = 1e-10;
    double x_tol = 1e-10;
    std::size_t restarts = 5;       // jittered restarts around the best point
    double jitter = 0.05;           // relative jitter applied per restart
    std::uint64_t seed = 0;
    std::vector<double> step;       // initial simplex step per dimension
};

struct SimplexResult {
    std::vector<double> x;
    double fmin = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// Derivative-free Nelder-Mead simplex minimization with multi-start.
// The objective may return +inf to reject a point.
SimplexResult minimize(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& x0, const SimplexOptions& opt = {});

// Central finite-difference gradient; step h_i = scale*(1+|x_i|).
std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x, double scale = 1e-6);

// Central finite-difference Hessian (row-major, n x n).
std::vector<double> fd_hessian(const std::function<double(const std::vector<double>&)>& f,
                               const std::vector<double>& x, double scale = 1e-4);

// In-place Gauss-Jordan inverse; throws on a singular matrix.
std::vector<double> invert(std::vector<double> a, std::size_t n);

}  // namespace sealevel::optim
