#pragma once

#include <vector>

#include "monoband/types.hpp"

namespace monoband::tuning {

// Geometric grid of 12 candidate regression bandwidths spanning
// [0.75 n^{-1/5}, min(0.45, 6 n^{-1/5})].
std::vector<double> candidate_grid(int n);

// GCV over the candidates for one series, scored on the plain local-linear
// smoother at the observation times. Ties break toward the larger bandwidth.
double gcv_select_trend(const double* y, int n, const std::vector<double>& candidates);

// GCV for the time-varying coefficient fit (scalar response).
double gcv_select_regression(const double* y, const double* x, int n, int p,
                             const std::vector<double>& candidates);

// Per-coordinate GCV, averaged into one shared bandwidth.
double gcv_select_panel(const TimeSeriesPanel& panel, const std::vector<double>& candidates);

// Practical rearrangement bandwidth (hr^2 + (n hr)^{-1/2})^{2/3}, the
// R_n^{2/3} recommendation evaluated without its log factor.
double hd_default(double hr, int n);

// Minimum volatility selection of the block length over sorted candidates.
// Deviations are measured from the mean covariance increment across all
// candidates; ties go to the smallest index.
int mv_select(const std::vector<double>& residuals, int n, int p,
              const std::vector<int>& candidates);

// Default MV candidates around n^{1/3}.
std::vector<int> mv_candidates(int n);

// Dense reference of the MV neighborhood functional, for tests.
double mv_se_dense(const std::vector<double>& residuals, int n, int p,
                   const std::vector<int>& candidates, int window_lo, int window_hi,
                   int time_index);

// Fills any unset entries of cfg (hr by GCV, hd by the default rule, L by MV)
// for a trend panel; regression variant below.
void resolve_trend_config(const TimeSeriesPanel& panel, BandwidthConfig& cfg);
void resolve_regression_config(const double* y, const double* x, int n, int p,
                               BandwidthConfig& cfg);

}  // namespace monoband::tuning
