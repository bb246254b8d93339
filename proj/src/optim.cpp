#include "sealevel/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace sealevel::optim {

namespace {

SimplexResult nelder_mead_once(const std::function<double(const std::vector<double>&)>& f,
                               const std::vector<double>& x0,
                               const std::vector<double>& step, const SimplexOptions& opt) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, shrink = 0.5;
    std::size_t it = 0;
    SimplexResult res;
    for (; it < opt.max_iter; ++it) {
        std::vector<std::size_t> ord(n + 1);
        for (std::size_t i = 0; i <= n; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        {
            std::vector<std::vector<double>> p2(n + 1);
            std::vector<double> f2(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                p2[i] = pts[ord[i]];
                f2[i] = fv[ord[i]];
            }
            pts.swap(p2);
            fv.swap(f2);
        }
        double span = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            span = std::max(span, std::fabs(pts[n][i] - pts[0][i]));
        const double fspan = std::isfinite(fv[n]) ? std::fabs(fv[n] - fv[0]) : 1.0;
        if (fspan < opt.f_tol * (1.0 + std::fabs(fv[0])) && span < opt.x_tol * (1.0 + span)) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (centroid[j] - pts[n][j]);
            return p;
        };
        std::vector<double> xr = blend(alpha);
        const double fr = f(xr);
        if (fr < fv[0]) {
            std::vector<double> xe = blend(gamma);
            const double fe = f(xe);
            if (fe < fr) {
                pts[n] = std::move(xe);
                fv[n] = fe;
            } else {
                pts[n] = std::move(xr);
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            pts[n] = std::move(xr);
            fv[n] = fr;
        } else {
            std::vector<double> xc = blend(fr < fv[n] ? rho : -rho);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[n])) {
                pts[n] = std::move(xc);
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + shrink * (pts[i][j] - pts[0][j]);
                    fv[i] = f(pts[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    res.x = pts[best];
    res.fmin = fv[best];
    res.iterations = it;
    return res;
}

}  // namespace

SimplexResult minimize(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& x0, const SimplexOptions& opt) {
    if (x0.empty()) throw std::invalid_argument("minimize: empty starting point");
    std::vector<double> step = opt.step;
    if (step.empty()) {
        step.resize(x0.size());
        for (std::size_t i = 0; i < x0.size(); ++i)
            step[i] = x0[i] != 0.0 ? 0.1 * std::fabs(x0[i]) : 0.1;
    }
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd(0.0, 1.0);

    SimplexResult best = nelder_mead_once(f, x0, step, opt);
    for (std::size_t r = 1; r < std::max<std::size_t>(opt.restarts, 1); ++r) {
        std::vector<double> xs = best.x;
        for (std::size_t i = 0; i < xs.size(); ++i)
            xs[i] += opt.jitter * (1.0 + std::fabs(xs[i])) * nd(rng);
        SimplexResult cand = nelder_mead_once(f, xs, step, opt);
        if (cand.fmin < best.fmin) best = cand;
    }
    return best;
}

std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x, double scale) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = scale * (1.0 + std::fabs(x[i]));
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

std::vector<double> fd_hessian(const std::function<double(const std::vector<double>&)>& f,
                               const std::vector<double>& x, double scale) {
    const std::size_t n = x.size();
    std::vector<double> H(n * n, 0.0);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = scale * (1.0 + std::fabs(x[i]));
    const double f0 = f(x);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += h[i];
        xm[i] -= h[i];
        H[i * n + i] = (f(xp) - 2.0 * f0 + f(xm)) / (h[i] * h[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            std::vector<double> xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += h[i]; xpp[j] += h[j];
            xpm[i] += h[i]; xpm[j] -= h[j];
            xmp[i] -= h[i]; xmp[j] += h[j];
            xmm[i] -= h[i]; xmm[j] -= h[j];
            const double v = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h[i] * h[j]);
            H[i * n + j] = H[j * n + i] = v;
        }
    }
    return H;
}

std::vector<double> invert(std::vector<double> a, std::size_t n) {
    std::vector<double> inv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
        if (std::fabs(a[piv * n + col]) < 1e-14)
            throw std::runtime_error("invert: singular matrix");
        if (piv != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a[piv * n + c], a[col * n + c]);
                std::swap(inv[piv * n + c], inv[col * n + c]);
            }
        const double d = a[col * n + col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double m = a[r * n + col];
            if (m == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r * n + c] -= m * a[col * n + c];
                inv[r * n + c] -= m * inv[col * n + c];
            }
        }
    }
    return inv;
}

}  // namespace sealevel::optim
