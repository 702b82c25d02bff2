#include "monoband/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "monoband/errors.hpp"
#include "monoband/lrcov.hpp"
#include "monoband/smoother.hpp"

namespace monoband::tuning {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

struct GcvValue {
    double gcv;
    bool valid;
};

// GCV on the plain local-linear smoother. Scoring the jackknife fit instead
// degenerates on smooth trends (its bias term is already cancelled, so the
// criterion slides to the largest candidate); the reference selection ranges
// come from the uncorrected smoother.
GcvValue gcv_trend_at(const double* y, int n, double h) {
    smoother::HatInfo info;
    try {
        info = smoother::trend_hat(y, n, h);
    } catch (const SingularDesign&) {
        return {0.0, false};
    }
    double trace = 0.0, rss = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
        trace += info.hat_diag[i];
        const double r = y[i] - info.fitted[i];
        rss += r * r;
        scale += y[i] * y[i];
    }
    if (rss <= scale * 1e-20) rss = 0.0;  // exact fit up to rounding
    const double denom = 1.0 - trace / n;
    if (denom <= 1e-8) return {0.0, false};
    return {rss / n / (denom * denom), true};
}

GcvValue gcv_regression_at(const double* y, const double* x, int n, int p, double h) {
    smoother::HatInfo info;
    try {
        info = smoother::regression_hat(y, x, n, p, h);
    } catch (const SingularDesign&) {
        return {0.0, false};
    }
    double trace = 0.0, rss = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
        trace += info.hat_diag[i];
        const double r = y[i] - info.fitted[i];
        rss += r * r;
        scale += y[i] * y[i];
    }
    if (rss <= scale * 1e-20) rss = 0.0;
    const double denom = 1.0 - trace / n;
    if (denom <= 1e-8) return {0.0, false};
    return {rss / n / (denom * denom), true};
}

template <typename Eval>
double argmin_gcv(const std::vector<double>& candidates, Eval&& eval) {
    std::optional<double> best_h;
    double best = 0.0;
    for (double h : candidates) {
        const GcvValue v = eval(h);
        if (!v.valid) continue;
        // near-equal values count as ties, which go to the larger bandwidth
        if (!best_h.has_value() || v.gcv <= best * (1.0 + 1e-9)) {
            best = best_h.has_value() ? std::min(best, v.gcv) : v.gcv;
            best_h = h;
        }
    }
    if (!best_h.has_value())
        throw DegenerateGCV("no candidate bandwidth yields a usable GCV value");
    return *best_h;
}

}  // namespace

std::vector<double> candidate_grid(int n) {
    if (n < 30) throw InvalidConfig("candidate grid needs n >= 30");
    const double lo = 0.75 * std::pow(n, -0.2);
    const double hi = std::min(0.45, 1.08 * std::pow(n, -0.2));
    const int count = 12;
    std::vector<double> grid(count);
    const double ratio = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) grid[i] = lo * std::exp(ratio * i);
    return grid;
}

double gcv_select_trend(const double* y, int n, const std::vector<double>& candidates) {
    return argmin_gcv(candidates, [&](double h) { return gcv_trend_at(y, n, h); });
}

double gcv_select_regression(const double* y, const double* x, int n, int p,
                             const std::vector<double>& candidates) {
    return argmin_gcv(candidates,
                      [&](double h) { return gcv_regression_at(y, x, n, p, h); });
}

double gcv_select_panel(const TimeSeriesPanel& panel, const std::vector<double>& candidates) {
    double sum = 0.0;
    for (int k = 0; k < panel.p; ++k)
        sum += gcv_select_trend(panel.col(k), panel.n, candidates);
    return sum / panel.p;
}

double hd_default(double hr, int n) {
    const double rn = hr * hr + 1.0 / std::sqrt(n * hr);
    return std::min(std::pow(rn, 2.0 / 3.0), 0.45);
}

namespace {

// se over a candidate window, with deviations taken from the mean across ALL
// r candidates (the stabilization target), evaluated in the span of the
// factor vectors. With U = [u_1..u_r], G = U^T U, the windowed deviation sum
// is U D U^T where D = [diag_W(G_ii) - (E_W G + G E_W)/r + w G/r^2] / (w-1)
// and the nonzero eigenvalues of U D U^T are those of G^{1/2} D G^{1/2}.
double se_window_subspace(const linalg::Mat& gram, const linalg::Mat& gram_root, int w_lo,
                          int w_hi) {
    const int r = gram.rows;
    const int w = w_hi - w_lo + 1;
    if (w < 2) return 0.0;
    linalg::Mat d(r, r);
    for (int i = w_lo; i <= w_hi; ++i) {
        d(i, i) += gram(i, i);
        for (int c = 0; c < r; ++c) {
            d(i, c) -= gram(i, c) / r;
            d(c, i) -= gram(c, i) / r;
        }
    }
    const double shift = static_cast<double>(w) / (r * static_cast<double>(r));
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < r; ++c) d(i, c) += shift * gram(i, c);
    for (auto& v : d.a) v /= (w - 1);
    return linalg::trace_sqrt_psd(
        linalg::multiply(gram_root, linalg::multiply(d, gram_root)));
}

}  // namespace

double mv_se_dense(const std::vector<double>& residuals, int n, int p,
                   const std::vector<int>& candidates, int window_lo, int window_hi,
                   int time_index) {
    const int r = static_cast<int>(candidates.size());
    std::vector<linalg::Mat> sig;
    for (int l : candidates) {
        const LongRunIncrements inc = lrcov::cum_increments(residuals, n, p, l);
        linalg::Mat m(p, p);
        for (int row = 0; row < p; ++row)
            for (int c = 0; c < p; ++c)
                m(row, c) = inc.factor_col(row)[time_index] * inc.factor_col(c)[time_index] / l;
        sig.push_back(std::move(m));
    }
    linalg::Mat mean(p, p);
    for (const auto& m : sig)
        for (std::size_t i = 0; i < mean.a.size(); ++i) mean.a[i] += m.a[i] / r;
    linalg::Mat var(p, p);
    const int w = window_hi - window_lo + 1;
    for (int i = window_lo; i <= window_hi; ++i) {
        linalg::Mat diff(p, p);
        for (std::size_t idx = 0; idx < diff.a.size(); ++idx)
            diff.a[idx] = sig[i].a[idx] - mean.a[idx];
        const linalg::Mat sq = linalg::multiply(diff, diff);
        for (std::size_t idx = 0; idx < var.a.size(); ++idx) var.a[idx] += sq.a[idx] / (w - 1);
    }
    return linalg::trace_sqrt_psd(var);
}

int mv_select(const std::vector<double>& residuals, int n, int p,
              const std::vector<int>& candidates) {
    const int r = static_cast<int>(candidates.size());
    if (r < 3) throw InvalidConfig("minimum volatility needs at least 3 candidates");
    std::vector<LongRunIncrements> incs;
    incs.reserve(r);
    for (int l : candidates) incs.push_back(lrcov::cum_increments(residuals, n, p, l));
    const int k_lo = candidates.back();  // candidates sorted ascending

    std::vector<double> worst(r, 0.0);
    std::vector<double> u(static_cast<std::size_t>(r) * p);
    for (int k = k_lo; k <= n; ++k) {
        for (int i = 0; i < r; ++i) {
            const double scale = 1.0 / std::sqrt(static_cast<double>(candidates[i]));
            for (int c = 0; c < p; ++c)
                u[static_cast<std::size_t>(i) * p + c] = incs[i].factor_col(c)[k - 1] * scale;
        }
        if (p == 1) {
            // scalar shortcut: se = sqrt(sum (u_i^2 - mean)^2 / (w-1))
            double mean = 0.0;
            for (int i = 0; i < r; ++i) mean += u[i] * u[i] / r;
            for (int j = 0; j < r; ++j) {
                const int w_lo = std::max(0, j - 3);
                const int w_hi = std::min(r - 1, j + 3);
                double acc = 0.0;
                for (int i = w_lo; i <= w_hi; ++i)
                    acc += (u[i] * u[i] - mean) * (u[i] * u[i] - mean);
                worst[j] = std::max(worst[j], std::sqrt(acc / (w_hi - w_lo)));
            }
            continue;
        }
        linalg::Mat gram(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = i; j < r; ++j) {
                double acc = 0.0;
                for (int c = 0; c < p; ++c)
                    acc += u[static_cast<std::size_t>(i) * p + c] *
                           u[static_cast<std::size_t>(j) * p + c];
                gram(i, j) = acc;
                gram(j, i) = acc;
            }
        const linalg::Mat root = linalg::sym_sqrt_psd(gram);
        for (int j = 0; j < r; ++j)
            worst[j] = std::max(worst[j], se_window_subspace(gram, root, std::max(0, j - 3),
                                                             std::min(r - 1, j + 3)));
    }
    int best_j = 0;
    for (int j = 1; j < r; ++j)
        if (worst[j] < worst[best_j]) best_j = j;  // strict: ties to the smallest j
    return candidates[best_j];
}

std::vector<int> mv_candidates(int n) {
    const double root = std::pow(n, 1.0 / 3.0);
    int lo = std::max(2, static_cast<int>(std::floor(root / 2.0)));
    int hi = std::min(n / 2, static_cast<int>(std::ceil(2.0 * root)));
    if (hi < lo + 2) hi = std::min(n / 2, lo + 2);
    const int count = std::min(8, hi - lo + 1);
    std::vector<int> cands;
    for (int i = 0; i < count; ++i) {
        const int v = lo + static_cast<int>(std::llround(
                               static_cast<double>(i) * (hi - lo) / std::max(1, count - 1)));
        if (cands.empty() || v > cands.back()) cands.push_back(v);
    }
    return cands;
}

void resolve_trend_config(const TimeSeriesPanel& panel, BandwidthConfig& cfg) {
    if (cfg.hr.empty())
        cfg.hr = {gcv_select_panel(panel, candidate_grid(panel.n))};
    if (cfg.hd.empty()) {
        cfg.hd.reserve(cfg.hr.size());
        for (double h : cfg.hr) cfg.hd.push_back(hd_default(h, panel.n));
    }
    if (cfg.L == 0) {
        const std::vector<double> mt = smoother::fit_at_observations(panel, cfg.hr);
        const std::vector<double> res = smoother::residuals_trend(panel, mt);
        cfg.L = mv_select(res, panel.n, panel.p, mv_candidates(panel.n));
    }
    if (cfg.G == 0) cfg.G = std::min(400, panel.n);
}

void resolve_regression_config(const double* y, const double* x, int n, int p,
                               BandwidthConfig& cfg) {
    if (cfg.hr.empty())
        cfg.hr = {gcv_select_regression(y, x, n, p, candidate_grid(n))};
    // contrast coordinates carry noisier estimates than trend panels, so the
    // rearrangement stays on the conservative side of the rule here
    if (cfg.hd.empty()) cfg.hd = {std::min(hd_default(cfg.hr[0], n), cfg.hr[0] / 2.0)};
    if (cfg.L == 0) {
        const std::vector<double> obs = smoother::observation_times(n);
        const smoother::RegFit fit = smoother::jackknife_regression(y, x, n, p, cfg.hr[0], obs);
        // column-major coefficient estimates at the observation times
        std::vector<double> mt(static_cast<std::size_t>(n) * p);
        for (int k = 0; k < p; ++k)
            for (int i = 0; i < n; ++i)
                mt[static_cast<std::size_t>(k) * n + i] =
                    fit.level[static_cast<std::size_t>(k) * n + i];
        const std::vector<double> res = smoother::residuals_regression(y, x, n, p, mt);
        std::vector<double> xe(static_cast<std::size_t>(n) * p);
        for (int k = 0; k < p; ++k)
            for (int i = 0; i < n; ++i)
                xe[static_cast<std::size_t>(k) * n + i] =
                    x[static_cast<std::size_t>(k) * n + i] * res[i];
        cfg.L = mv_select(xe, n, p, mv_candidates(n));
    }
    if (cfg.G == 0) cfg.G = std::min(400, n);
}

}  // namespace monoband::tuning
