#pragma once

#include <vector>

#include "monoband/types.hpp"

namespace monoband::rearrange {

// A coordinate's smooth estimate on the i/N grid, sorted by value so the
// rearranged inverse reduces to a count plus one kernel-CDF window sum.
struct SortedGrid {
    int N = 0;
    double hd = 0.0;
    std::vector<double> values;  // ascending
    std::vector<int> perm;       // perm[r] = original 0-based grid index of values[r]
    double vmin = 0.0, vmax = 0.0;
};

SortedGrid make_sorted_grid(const double* mtilde, int N, double hd);

// The rearranged inverse: (1/N) sum_i F_d((s - mtilde(i/N)) / hd) with F_d the
// closed-form Epanechnikov antiderivative. Nondecreasing in s, 0 below the
// data range, 1 above it.
double rearranged_inverse(const SortedGrid& grid, double s);
double rearranged_inverse(const double* mtilde, int N, double hd, double s);

// Left/right endpoints of one coordinate's valid interval: the image of the
// value range under the rearranged inverse, clipped to
// [hd log(1/hd), 1 - hd log(1/hd)].
Interval coordinate_domain(const SortedGrid& grid);

// Intersection across coordinates; throws EmptyDomain when it vanishes.
Interval domain_hat_T(const std::vector<SortedGrid>& grids);

// Inverts the rearranged inverse at each target by bisection (<= 60 rounds,
// |t - target| <= 1e-10). Targets must lie inside the coordinate's interval.
std::vector<double> monotone_eval(const SortedGrid& grid, const std::vector<double>& targets);

// Full rearrangement of a fitted panel: common domain, evaluation grid of G
// points strictly inside it, and the monotone estimates.
MonotoneFit rearrange_panel(const SmootherFit& fit, const std::vector<double>& hd, int G,
                            std::vector<SortedGrid>* keep_grids = nullptr);

std::vector<double> interior_grid(const Interval& domain, int G);

}  // namespace monoband::rearrange
