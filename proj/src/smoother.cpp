#include "monoband/smoother.hpp"

#include <algorithm>
#include <cmath>

#include "monoband/errors.hpp"
#include "monoband/kernels.hpp"
#include "monoband/linalg.hpp"

namespace monoband::smoother {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_bandwidth(int n, double h) {
    if (!(h > 0.0) || h >= 0.5) throw InvalidConfig("bandwidth must lie in (0, 0.5)");
    if (n * h < 8.0)
        throw SingularDesign("n*h < 8: local-linear system too thin to solve");
}

// Prefix moments of t_i^m and y_i t_i^m accumulated in extended precision so
// windowed sums come out of O(1) differences without cancellation trouble.
struct PrefixMoments {
    int n;
    // tp[m][i] = sum_{j<=i} t_j^m (1-based i, index 0 is zero)
    std::vector<long double> tp[5];
    std::vector<long double> yp[4];

    PrefixMoments(const double* y, int n_) : n(n_) {
        for (auto& v : tp) v.assign(n + 1, 0.0L);
        for (auto& v : yp) v.assign(n + 1, 0.0L);
        for (int i = 1; i <= n; ++i) {
            const long double t = static_cast<long double>(i) / n;
            long double pow = 1.0L;
            for (int m = 0; m <= 4; ++m) {
                tp[m][i] = tp[m][i - 1] + pow;
                if (m <= 3) yp[m][i] = yp[m][i - 1] + y[i - 1] * pow;
                pow *= t;
            }
        }
    }

    long double t_window(int m, int lo, int hi) const { return tp[m][hi] - tp[m][lo - 1]; }
    long double y_window(int m, int lo, int hi) const { return yp[m][hi] - yp[m][lo - 1]; }
};

struct WeightedSums {
    double s0, s1, s2;   // sum K (t_i-t)^l
    double t0, t1;       // sum K (t_i-t)^l y_i
    int count;
};

// Kernel-weighted sums around t from the prefix moments. The Epanechnikov
// weight expands into t_i powers: K((t_i-t)/h) (t_i-t)^l =
// 0.75 [ (t_i-t)^l - (t_i-t)^{l+2} / h^2 ].
WeightedSums window_sums(const PrefixMoments& pm, double t, double h) {
    const int n = pm.n;
    int lo = static_cast<int>(std::ceil(n * (t - h) - 1e-12));
    int hi = static_cast<int>(std::floor(n * (t + h) + 1e-12));
    lo = std::max(lo, 1);
    hi = std::min(hi, n);
    WeightedSums w{0.0, 0.0, 0.0, 0.0, 0.0, 0};
    if (hi < lo) return w;
    w.count = hi - lo + 1;

    long double m[5], ym[4];
    {
        // centered moments via binomial expansion of (t_i - t)^k
        const long double tc = t;
        long double raw[5], yraw[4];
        for (int k = 0; k <= 4; ++k) raw[k] = pm.t_window(k, lo, hi);
        for (int k = 0; k <= 3; ++k) yraw[k] = pm.y_window(k, lo, hi);
        static const double binom[5][5] = {
            {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
        for (int k = 0; k <= 4; ++k) {
            long double acc = 0.0L;
            long double tpow = 1.0L;
            for (int a = k; a >= 0; --a) {
                // term: C(k,a) t_i^a (-t)^{k-a}
                acc += binom[k][a] * raw[a] * ((k - a) % 2 == 0 ? tpow : -tpow);
                tpow *= tc;
            }
            m[k] = acc;
            if (k <= 3) {
                long double acy = 0.0L;
                long double typ = 1.0L;
                for (int a = k; a >= 0; --a) {
                    acy += binom[k][a] * yraw[a] * ((k - a) % 2 == 0 ? typ : -typ);
                    typ *= tc;
                }
                ym[k] = acy;
            }
        }
    }
    const long double inv_h2 = 1.0L / (static_cast<long double>(h) * h);
    w.s0 = static_cast<double>(0.75L * (m[0] - m[2] * inv_h2));
    w.s1 = static_cast<double>(0.75L * (m[1] - m[3] * inv_h2));
    w.s2 = static_cast<double>(0.75L * (m[2] - m[4] * inv_h2));
    w.t0 = static_cast<double>(0.75L * (ym[0] - ym[2] * inv_h2));
    w.t1 = static_cast<double>(0.75L * (ym[1] - ym[3] * inv_h2));
    return w;
}

void solve_point(const WeightedSums& w, double h, double t, double* level, double* deriv) {
    if (w.count < 3)
        throw SingularDesign("fewer than 3 observations receive positive weight at t=" +
                             std::to_string(t));
    const double det = w.s0 * w.s2 - w.s1 * w.s1;
    const double scale = w.s0 * h;
    if (!(det > 1e-14 * scale * scale))
        throw SingularDesign("local-linear design singular at t=" + std::to_string(t));
    *level = (w.s2 * w.t0 - w.s1 * w.t1) / det;
    *deriv = (w.s0 * w.t1 - w.s1 * w.t0) / det;
}

}  // namespace

std::vector<double> observation_times(int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = static_cast<double>(i + 1) / n;
    return t;
}

std::vector<double> grid_times(int N) { return observation_times(N); }

Fit1D ll_trend(const double* y, int n, double h, const std::vector<double>& eval) {
    check_bandwidth(n, h);
    PrefixMoments pm(y, n);
    Fit1D fit;
    fit.level.resize(eval.size());
    fit.deriv.resize(eval.size());
    for (std::size_t e = 0; e < eval.size(); ++e) {
        const WeightedSums w = window_sums(pm, eval[e], h);
        solve_point(w, h, eval[e], &fit.level[e], &fit.deriv[e]);
    }
    return fit;
}

std::vector<double> jackknife_trend(const double* y, int n, double h,
                                    const std::vector<double>& eval) {
    check_bandwidth(n, h * kInvSqrt2);
    PrefixMoments pm(y, n);
    std::vector<double> out(eval.size());
    for (std::size_t e = 0; e < eval.size(); ++e) {
        double lvl_half, lvl_full, d;
        solve_point(window_sums(pm, eval[e], h * kInvSqrt2), h * kInvSqrt2, eval[e],
                    &lvl_half, &d);
        solve_point(window_sums(pm, eval[e], h), h, eval[e], &lvl_full, &d);
        out[e] = 2.0 * lvl_half - lvl_full;
    }
    return out;
}

HatInfo trend_hat(const double* y, int n, double h) {
    check_bandwidth(n, h);
    PrefixMoments pm(y, n);
    HatInfo info;
    info.fitted.resize(n);
    info.hat_diag.resize(n);
    const double k0 = 0.75;  // K(0)
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / n;
        const WeightedSums w = window_sums(pm, t, h);
        double lvl, d;
        solve_point(w, h, t, &lvl, &d);
        info.fitted[i] = lvl;
        const double det = w.s0 * w.s2 - w.s1 * w.s1;
        info.hat_diag[i] = k0 * w.s2 / det;
    }
    return info;
}

namespace {

linalg::Mat reg_design(const double* x, int n, int p, double t, double h,
                       std::vector<double>* rhs, const double* y) {
    const int dim = 2 * p;
    linalg::Mat a(dim, dim);
    if (rhs != nullptr) rhs->assign(dim, 0.0);
    int lo = std::max(1, static_cast<int>(std::ceil(n * (t - h) - 1e-12)));
    int hi = std::min(n, static_cast<int>(std::floor(n * (t + h) + 1e-12)));
    std::vector<double> z(dim);
    for (int i = lo; i <= hi; ++i) {
        const double ti = static_cast<double>(i) / n;
        const double u = (ti - t) / h;
        const double w = kernels::kernel_eval({}, u);
        if (w <= 0.0) continue;
        for (int k = 0; k < p; ++k) {
            const double xi = x[static_cast<std::size_t>(k) * n + (i - 1)];
            z[k] = xi;
            z[p + k] = xi * (ti - t);
        }
        for (int r = 0; r < dim; ++r) {
            const double wz = w * z[r];
            for (int c = r; c < dim; ++c) a(r, c) += wz * z[c];
            if (rhs != nullptr) (*rhs)[r] += wz * y[i - 1];
        }
    }
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < r; ++c) a(r, c) = a(c, r);
    return a;
}

}  // namespace

RegFit ll_regression(const double* y, const double* x, int n, int p, double h,
                     const std::vector<double>& eval, double cond_limit) {
    check_bandwidth(n, h);
    RegFit fit;
    fit.p = p;
    const std::size_t ne = eval.size();
    fit.level.resize(ne * p);
    fit.deriv.resize(ne * p);
    std::vector<double> rhs;
    for (std::size_t e = 0; e < ne; ++e) {
        const linalg::Mat a = reg_design(x, n, p, eval[e], h, &rhs, y);
        linalg::Mat inv;
        try {
            inv = linalg::inverse(a, cond_limit);
        } catch (const SingularDesign&) {
            throw SingularDesign("regression design ill-conditioned at t=" +
                                 std::to_string(eval[e]));
        }
        for (int k = 0; k < p; ++k) {
            double lvl = 0.0, der = 0.0;
            for (int c = 0; c < 2 * p; ++c) {
                lvl += inv(k, c) * rhs[c];
                der += inv(p + k, c) * rhs[c];
            }
            fit.level[static_cast<std::size_t>(k) * ne + e] = lvl;
            fit.deriv[static_cast<std::size_t>(k) * ne + e] = der;
        }
    }
    return fit;
}

RegFit jackknife_regression(const double* y, const double* x, int n, int p, double h,
                            const std::vector<double>& eval) {
    const RegFit half = ll_regression(y, x, n, p, h * kInvSqrt2, eval);
    const RegFit full = ll_regression(y, x, n, p, h, eval);
    RegFit fit;
    fit.p = p;
    fit.level.resize(full.level.size());
    fit.deriv.resize(full.deriv.size());
    for (std::size_t i = 0; i < full.level.size(); ++i) {
        fit.level[i] = 2.0 * half.level[i] - full.level[i];
        fit.deriv[i] = 2.0 * half.deriv[i] - full.deriv[i];
    }
    return fit;
}

HatInfo regression_hat(const double* y, const double* x, int n, int p, double h) {
    check_bandwidth(n, h);
    HatInfo info;
    info.fitted.resize(n);
    info.hat_diag.resize(n);
    std::vector<double> rhs;
    const double k0 = 0.75;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / n;
        const linalg::Mat a = reg_design(x, n, p, t, h, &rhs, y);
        const linalg::Mat inv = linalg::inverse(a);
        double fitted = 0.0;
        double quad = 0.0;
        for (int r = 0; r < p; ++r) {
            const double xi = x[static_cast<std::size_t>(r) * n + i];
            double inner = 0.0;
            for (int c = 0; c < 2 * p; ++c) inner += inv(r, c) * rhs[c];
            fitted += xi * inner;
            for (int c = 0; c < p; ++c)
                quad += xi * inv(r, c) * x[static_cast<std::size_t>(c) * n + i];
        }
        info.fitted[i] = fitted;
        info.hat_diag[i] = k0 * quad;
    }
    return info;
}

SmootherFit fit_panel(const TimeSeriesPanel& panel, const std::vector<double>& hr, int N) {
    SmootherFit fit;
    fit.N = N;
    fit.p = panel.p;
    fit.grid = grid_times(N);
    fit.hr = hr;
    fit.mtilde.resize(static_cast<std::size_t>(N) * panel.p);
    fit.mhat.resize(static_cast<std::size_t>(N) * panel.p);
    for (int k = 0; k < panel.p; ++k) {
        const double h = hr.size() == 1 ? hr[0] : hr.at(k);
        const Fit1D plain = ll_trend(panel.col(k), panel.n, h, fit.grid);
        const std::vector<double> jack = jackknife_trend(panel.col(k), panel.n, h, fit.grid);
        std::copy(plain.level.begin(), plain.level.end(),
                  fit.mhat.begin() + static_cast<std::size_t>(k) * N);
        std::copy(jack.begin(), jack.end(),
                  fit.mtilde.begin() + static_cast<std::size_t>(k) * N);
    }
    return fit;
}

std::vector<double> fit_at_observations(const TimeSeriesPanel& panel,
                                        const std::vector<double>& hr) {
    const std::vector<double> obs = observation_times(panel.n);
    std::vector<double> out(static_cast<std::size_t>(panel.n) * panel.p);
    for (int k = 0; k < panel.p; ++k) {
        const double h = hr.size() == 1 ? hr[0] : hr.at(k);
        const std::vector<double> jack = jackknife_trend(panel.col(k), panel.n, h, obs);
        std::copy(jack.begin(), jack.end(), out.begin() + static_cast<std::size_t>(k) * panel.n);
    }
    return out;
}

std::vector<double> residuals_trend(const TimeSeriesPanel& panel,
                                    const std::vector<double>& mtilde_at_obs) {
    std::vector<double> res(static_cast<std::size_t>(panel.n) * panel.p);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = panel.y[i] - mtilde_at_obs[i];
    return res;
}

std::vector<double> residuals_regression(const double* y, const double* x, int n, int p,
                                         const std::vector<double>& mtilde_at_obs) {
    std::vector<double> res(n);
    for (int i = 0; i < n; ++i) {
        double fitted = 0.0;
        for (int k = 0; k < p; ++k)
            fitted += x[static_cast<std::size_t>(k) * n + i] *
                      mtilde_at_obs[static_cast<std::size_t>(k) * n + i];
        res[i] = y[i] - fitted;
    }
    return res;
}

}  // namespace monoband::smoother
