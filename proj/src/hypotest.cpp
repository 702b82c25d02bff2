#include "monoband/hypotest.hpp"

#include <algorithm>
#include <cmath>

#include "monoband/errors.hpp"
#include "monoband/linalg.hpp"
#include "monoband/smoother.hpp"

namespace monoband::hypotest {

Containment band_contains(const ScbResult& scb, double alpha,
                          const std::vector<double>& curve) {
    const double q = scb.q_hat.at(alpha);
    Containment c;
    c.worst_excursion = -q;
    for (int k = 0; k < scb.K; ++k) {
        for (int g = 0; g < scb.G; ++g) {
            const double v = curve[static_cast<std::size_t>(k) * scb.G + g];
            // boundary inclusive against the band values as published
            if (v > scb.upper(g, k, alpha) || v < scb.lower(g, k, alpha)) c.contained = false;
            const double dev = std::fabs(v - scb.estimate_at(g, k)) - q;
            if (dev > c.worst_excursion) {
                c.worst_excursion = dev;
                c.worst_coordinate = k;
                c.worst_time = scb.eval_grid[g];
            }
        }
    }
    return c;
}

QuadraticFit constrained_quadratic_fit(const double* y, int n) {
    if (n < 3) throw InvalidConfig("quadratic fit needs n >= 3");
    // power sums of t_i = i/n
    double s[5] = {0, 0, 0, 0, 0};
    double sy[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / n;
        double pw = 1.0;
        for (int m = 0; m <= 4; ++m) {
            s[m] += pw;
            if (m <= 2) sy[m] += pw * y[i];
            pw *= t;
        }
    }
    double yy = 0.0;
    for (int i = 0; i < n; ++i) yy += y[i] * y[i];

    auto sse_of = [&](double a, double b, double c) {
        // ||y - a t^2 - b t - c||^2 expanded in the power sums
        return yy - 2.0 * (a * sy[2] + b * sy[1] + c * sy[0]) + a * a * s[4] + b * b * s[2] +
               c * c * s[0] + 2.0 * (a * b * s[3] + a * c * s[2] + b * c * s[1]);
    };

    QuadraticFit best;
    bool have = false;
    for (int pattern = 0; pattern < 4; ++pattern) {
        const bool free_a = (pattern & 1) == 0;
        const bool free_b = (pattern & 2) == 0;
        std::vector<int> active;  // 0 -> a, 1 -> b, 2 -> c (c always free)
        if (free_a) active.push_back(0);
        if (free_b) active.push_back(1);
        active.push_back(2);
        const int m = static_cast<int>(active.size());
        linalg::Mat gram(m, m);
        std::vector<double> rhs(m);
        const double cross[3][3] = {{s[4], s[3], s[2]}, {s[3], s[2], s[1]}, {s[2], s[1], s[0]}};
        for (int r = 0; r < m; ++r) {
            rhs[r] = sy[2 - active[r]];
            for (int cidx = 0; cidx < m; ++cidx) gram(r, cidx) = cross[active[r]][active[cidx]];
        }
        std::vector<double> sol;
        try {
            sol = linalg::solve(gram, rhs);
        } catch (const SingularDesign&) {
            continue;
        }
        double coef[3] = {0.0, 0.0, 0.0};
        for (int r = 0; r < m; ++r) coef[active[r]] = sol[r];
        if (coef[0] < -1e-12 || coef[1] < -1e-12) continue;
        coef[0] = std::max(coef[0], 0.0);
        coef[1] = std::max(coef[1], 0.0);
        const double sse = sse_of(coef[0], coef[1], coef[2]);
        if (!have || sse < best.sse) {
            best = {coef[0], coef[1], coef[2], sse};
            have = true;
        }
    }
    return best;
}

TestOutcome test_quadratic_trend(const ScbResult& scb, const TimeSeriesPanel& panel,
                                 double alpha) {
    std::vector<double> curve(static_cast<std::size_t>(scb.G) * scb.K);
    double threshold = 0.0;
    for (int k = 0; k < scb.K; ++k) {
        const QuadraticFit fit = constrained_quadratic_fit(panel.col(k), panel.n);
        for (int g = 0; g < scb.G; ++g) {
            const double t = scb.eval_grid[g];
            curve[static_cast<std::size_t>(k) * scb.G + g] = fit.a * t * t + fit.b * t + fit.c;
        }
    }
    // rejection iff the joint band fails to contain the fitted curves
    const Containment c = band_contains(scb, alpha, curve);
    for (int k = 0; k < scb.K; ++k)
        for (int g = 0; g < scb.G; ++g)
            threshold = std::max(threshold, std::fabs(curve[static_cast<std::size_t>(k) * scb.G + g] -
                                                      scb.estimate_at(g, k)));
    TestOutcome out;
    out.level = alpha;
    out.reject = !c.contained;
    out.witness_coordinate = c.worst_coordinate;
    out.witness_time = c.worst_time;
    out.p_value = pvalue_from_threshold(scb, threshold);
    return out;
}

namespace {
int snap_to_grid(const ScbResult& scb, double t) {
    if (!scb.domain.contains(t))
        throw DomainViolation("test time lies outside the valid domain");
    int best = 0;
    double dist = std::fabs(scb.eval_grid[0] - t);
    for (int g = 1; g < scb.G; ++g) {
        const double d = std::fabs(scb.eval_grid[g] - t);
        if (d < dist) {
            dist = d;
            best = g;
        }
    }
    return best;
}
}  // namespace

TestOutcome test_increase_span(const ScbResult& scb, double t0, double t1, double c,
                               double alpha) {
    if (!(t0 < t1)) throw InvalidConfig("need t0 < t1");
    const int g0 = snap_to_grid(scb, t0);
    const int g1 = snap_to_grid(scb, t1);
    const double q = scb.q_hat.at(alpha);
    TestOutcome out;
    out.level = alpha;
    double best = 0.0;
    for (int k = 0; k < scb.K; ++k) {
        const double rise = scb.estimate_at(g1, k) - scb.estimate_at(g0, k);
        if (k == 0 || rise > best) {
            best = rise;
            out.witness_coordinate = k;
        }
    }
    out.witness_time = scb.eval_grid[g1];
    out.reject = best - 2.0 * q > c;
    out.p_value = pvalue_from_threshold(scb, (best - c) / 2.0);
    return out;
}

double increase_window_stat(const ScbResult& scb, double delta) {
    // monotone estimates: the best partner of t0 is the farthest grid point
    // within delta
    const double step = scb.G > 1 ? scb.eval_grid[1] - scb.eval_grid[0] : 0.0;
    const int span = step > 0.0 ? static_cast<int>(std::floor(delta / step + 1e-12)) : 0;
    double best = 0.0;
    for (int k = 0; k < scb.K; ++k) {
        for (int g = 0; g < scb.G; ++g) {
            const int partner = std::min(scb.G - 1, g + span);
            if (partner == g) continue;
            best = std::max(best, scb.estimate_at(partner, k) - scb.estimate_at(g, k));
        }
    }
    return best;
}

double increase_window_stat_full(const ScbResult& scb, double delta) {
    double best = 0.0;
    for (int k = 0; k < scb.K; ++k)
        for (int g0 = 0; g0 < scb.G; ++g0)
            for (int g1 = g0 + 1; g1 < scb.G; ++g1) {
                if (scb.eval_grid[g1] - scb.eval_grid[g0] > delta + 1e-12) break;
                best = std::max(best, scb.estimate_at(g1, k) - scb.estimate_at(g0, k));
            }
    return best;
}

TestOutcome test_increase_window(const ScbResult& scb, double delta, double c, double alpha) {
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidConfig("delta must lie in (0, 1]");
    const double q = scb.q_hat.at(alpha);
    const double stat = increase_window_stat(scb, delta);
    TestOutcome out;
    out.level = alpha;
    out.reject = stat - 2.0 * q > c;
    out.p_value = pvalue_from_threshold(scb, (stat - c) / 2.0);
    return out;
}

double pvalue_from_threshold(const ScbResult& scb, double threshold) {
    std::vector<double> sorted = scb.sup_samples;
    std::sort(sorted.begin(), sorted.end());
    const int b = static_cast<int>(sorted.size());
    const int count = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), threshold) -
                                       sorted.begin());
    const double p = 1.0 - static_cast<double>(count) / b;
    return std::max(p, 1.0 / b);
}

double vic_score(const double* y, const double* x, int n, int p,
                 const std::vector<int>& subset, double hr) {
    if (subset.empty()) throw InvalidConfig("VIC needs a nonempty subset");
    const int d = static_cast<int>(subset.size());
    std::vector<double> xs(static_cast<std::size_t>(n) * d);
    for (int c = 0; c < d; ++c)
        std::copy_n(x + static_cast<std::size_t>(subset[c]) * n, n,
                    xs.begin() + static_cast<std::size_t>(c) * n);
    const std::vector<double> obs = smoother::observation_times(n);
    const smoother::RegFit fit = smoother::ll_regression(y, xs.data(), n, d, hr, obs);
    double sse = 0.0;
    for (int i = 0; i < n; ++i) {
        double fitted = 0.0;
        for (int c = 0; c < d; ++c)
            fitted += xs[static_cast<std::size_t>(c) * n + i] *
                      fit.level[static_cast<std::size_t>(c) * n + i];
        const double r = y[i] - fitted;
        sse += r * r;
    }
    sse = std::max(sse, 1e-300);
    return std::log(sse) + std::pow(n, -0.4) * d;
}

}  // namespace monoband::hypotest
