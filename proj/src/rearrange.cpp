#include "monoband/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "monoband/errors.hpp"
#include "monoband/simd.hpp"

namespace monoband::rearrange {

SortedGrid make_sorted_grid(const double* mtilde, int N, double hd) {
    if (N < 100) throw InvalidConfig("rearrangement grid needs N >= 100");
    if (!(hd > 0.0)) throw InvalidConfig("hd must be positive");
    SortedGrid g;
    g.N = N;
    g.hd = hd;
    g.perm.resize(N);
    std::iota(g.perm.begin(), g.perm.end(), 0);
    std::sort(g.perm.begin(), g.perm.end(),
              [&](int a, int b) { return mtilde[a] < mtilde[b] || (mtilde[a] == mtilde[b] && a < b); });
    g.values.resize(N);
    for (int r = 0; r < N; ++r) g.values[r] = mtilde[g.perm[r]];
    g.vmin = g.values.front();
    g.vmax = g.values.back();
    return g;
}

double rearranged_inverse(const SortedGrid& grid, double s) {
    // values <= s - hd contribute exactly 1, values >= s + hd exactly 0.
    const double hd = grid.hd;
    const auto lo = std::upper_bound(grid.values.begin(), grid.values.end(), s - hd);
    const auto hi = std::lower_bound(lo, grid.values.end(), s + hd);
    const double ones = static_cast<double>(lo - grid.values.begin());
    const double partial = simd::active_ops().epan_cdf_sum(
        &*lo, static_cast<int>(hi - lo), s, 1.0 / hd);
    return (ones + partial) / grid.N;
}

double rearranged_inverse(const double* mtilde, int N, double hd, double s) {
    return rearranged_inverse(make_sorted_grid(mtilde, N, hd), s);
}

Interval coordinate_domain(const SortedGrid& grid) {
    const double clip = grid.hd * std::log(1.0 / grid.hd);
    Interval iv;
    iv.lo = std::max(rearranged_inverse(grid, grid.vmin), clip);
    iv.hi = std::min(rearranged_inverse(grid, grid.vmax), 1.0 - clip);
    return iv;
}

Interval domain_hat_T(const std::vector<SortedGrid>& grids) {
    if (grids.empty()) throw InvalidConfig("no coordinates given");
    Interval iv{0.0, 1.0};
    for (const SortedGrid& g : grids) {
        const Interval c = coordinate_domain(g);
        iv.lo = std::max(iv.lo, c.lo);
        iv.hi = std::min(iv.hi, c.hi);
    }
    if (!(iv.lo < iv.hi))
        throw EmptyDomain("domain intersection is empty; bandwidths too large for n "
                          "or the smooth estimate is wildly non-monotone");
    return iv;
}

std::vector<double> monotone_eval(const SortedGrid& grid, const std::vector<double>& targets) {
    const Interval iv = coordinate_domain(grid);
    std::vector<double> out(targets.size());
    const double s_lo0 = grid.vmin - grid.hd;
    const double s_hi0 = grid.vmax + grid.hd;
    for (std::size_t q = 0; q < targets.size(); ++q) {
        const double t = targets[q];
        if (t < iv.lo - 1e-9 || t > iv.hi + 1e-9)
            throw DomainViolation("evaluation point t=" + std::to_string(t) +
                                  " lies outside the valid domain");
        double lo = s_lo0, hi = s_hi0;
        double mid = 0.5 * (lo + hi);
        for (int it = 0; it < 60; ++it) {
            mid = 0.5 * (lo + hi);
            const double f = rearranged_inverse(grid, mid) - t;
            if (std::fabs(f) <= 1e-10) break;
            if (f < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        out[q] = mid;
    }
    // The inverse is nondecreasing; bisection noise below its tolerance must
    // not leak into the monotone estimate.
    for (std::size_t q = 1; q < out.size(); ++q)
        if (targets[q] >= targets[q - 1]) out[q] = std::max(out[q], out[q - 1]);
    return out;
}

std::vector<double> interior_grid(const Interval& domain, int G) {
    std::vector<double> grid(G);
    for (int g = 0; g < G; ++g)
        grid[g] = domain.lo + domain.length() * (g + 1) / (G + 1);
    return grid;
}

MonotoneFit rearrange_panel(const SmootherFit& fit, const std::vector<double>& hd, int G,
                            std::vector<SortedGrid>* keep_grids) {
    std::vector<SortedGrid> grids;
    grids.reserve(fit.p);
    for (int k = 0; k < fit.p; ++k) {
        const double h = hd.size() == 1 ? hd[0] : hd.at(k);
        grids.push_back(make_sorted_grid(fit.mtilde_col(k), fit.N, h));
    }
    MonotoneFit mono;
    mono.G = G;
    mono.K = fit.p;
    mono.domain = domain_hat_T(grids);
    mono.eval_grid = interior_grid(mono.domain, G);
    mono.m_I.resize(static_cast<std::size_t>(G) * fit.p);
    for (int k = 0; k < fit.p; ++k) {
        const std::vector<double> vals = monotone_eval(grids[k], mono.eval_grid);
        std::copy(vals.begin(), vals.end(), mono.col(k));
    }
    if (keep_grids != nullptr) *keep_grids = std::move(grids);
    return mono;
}

}  // namespace monoband::rearrange
