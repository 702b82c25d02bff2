#pragma once

#include <vector>

#include "monoband/types.hpp"

namespace monoband::smoother {

struct Fit1D {
    std::vector<double> level;
    std::vector<double> deriv;
};

// Local-linear fit of one series observed at t_i = i/n, solved from the 2x2
// weighted normal equations at each evaluation point. Throws SingularDesign
// when the design degenerates (n*h < 8 or a collapsed determinant).
Fit1D ll_trend(const double* y, int n, double h, const std::vector<double>& eval);

// Jackknife bias-corrected estimate 2 m_{h/sqrt2} - m_h.
std::vector<double> jackknife_trend(const double* y, int n, double h,
                                    const std::vector<double>& eval);

// Plain local-linear fitted values at the observation times together with the
// hat-matrix diagonal entries (used by GCV).
struct HatInfo {
    std::vector<double> fitted;
    std::vector<double> hat_diag;
};
HatInfo trend_hat(const double* y, int n, double h);

// Time-varying coefficient fit: at each eval point solves the 2p x 2p
// weighted normal equations of the criterion with x_i^T eta0 + x_i^T eta1
// (t_i - t). Levels/derivs are column-major (coordinate-major) over eval.
struct RegFit {
    int p = 0;
    std::vector<double> level;
    std::vector<double> deriv;
};
RegFit ll_regression(const double* y, const double* x, int n, int p, double h,
                     const std::vector<double>& eval, double cond_limit = 1e12);
RegFit jackknife_regression(const double* y, const double* x, int n, int p, double h,
                            const std::vector<double>& eval);
HatInfo regression_hat(const double* y, const double* x, int n, int p, double h);

// Jackknife fit of every panel coordinate on the i/N grid; also keeps the
// plain local-linear fit for diagnostics.
SmootherFit fit_panel(const TimeSeriesPanel& panel, const std::vector<double>& hr, int N);

// Jackknife estimates at the observation times, n*p column-major.
std::vector<double> fit_at_observations(const TimeSeriesPanel& panel,
                                        const std::vector<double>& hr);

// Residuals y - mtilde (trend) or y - x^T mtilde (regression, single column).
std::vector<double> residuals_trend(const TimeSeriesPanel& panel,
                                    const std::vector<double>& mtilde_at_obs);
std::vector<double> residuals_regression(const double* y, const double* x, int n, int p,
                                         const std::vector<double>& mtilde_at_obs);

std::vector<double> observation_times(int n);
std::vector<double> grid_times(int N);

}  // namespace monoband::smoother
