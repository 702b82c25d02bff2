#pragma once

#include <vector>

#include "monoband/linalg.hpp"
#include "monoband/types.hpp"

namespace monoband::lrcov {

// Rolling residual block sums Delta_j (trend mode). factors[k*n + j] holds
// Delta_{j+1,k} in paper indexing; entries with j+1 < L are zero so the first
// L-1 bootstrap innovations vanish, matching the cumulative estimator's sum
// starting at i = L.
LongRunIncrements cum_increments(const std::vector<double>& residuals, int n, int p, int L);

// Q-hat(k) reconstructed from the factors; k is 1-based paper index.
linalg::Mat cumulative_q(const LongRunIncrements& inc, int k);

// Kernel-weighted second moment of the covariates at the clamped point
// t* = max(h_r, min(t, 1 - h_r)).
linalg::Mat m_hat(const double* x, int n, int p, double t, double hr);

// Regression-mode factors u_j = C M^{-1}(t_j) w_j with w_j the rolling block
// sum of x_i eps_i. Sigma_C(t_j) = u_j u_j^T / L reproduces the plug-in
// C M^{-1} Lambda M^{-1} C^T exactly because Lambda(t_j) = w_j w_j^T / L.
LongRunIncrements sigma_c_factors(const double* x, int n, int p,
                                  const std::vector<double>& residuals,
                                  const linalg::Mat& contrast, int L, double hr,
                                  double ridge = 0.0, double cond_limit = 1e12);

void check_window(int L, int n);

}  // namespace monoband::lrcov
