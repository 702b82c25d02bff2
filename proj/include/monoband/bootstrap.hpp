#pragma once

#include <cstdint>
#include <vector>

#include "monoband/linalg.hpp"
#include "monoband/rearrange.hpp"
#include "monoband/types.hpp"

namespace monoband::bootstrap {

// Banded table of (1/(n h)) K~*((j/n - i/N)/h, i/N) over the observation index
// j, one row per rearrangement grid point i. Rows are shared by every
// coordinate with the same regression bandwidth.
struct KernelRowTable {
    int n = 0;
    int N = 0;
    double h = 0.0;
    std::vector<int> j_lo;            // first contributing 0-based obs index
    std::vector<int> len;
    std::vector<std::size_t> offset;  // into values
    std::vector<double> values;

    const double* row(int i) const { return values.data() + offset[i]; }
};

KernelRowTable build_row_table(int n, int N, double h);

// Normalized rearrangement weights of one (coordinate, grid point) pair,
// sparse over the grid indices whose smooth value lies within hd of the
// monotone estimate. Throws EmptyWeightRow when the row has no mass.
struct WeightRow {
    std::vector<int> grid_idx;  // 0-based i
    std::vector<double> w;      // sums to 1
};
WeightRow weights_row(const rearrange::SortedGrid& grid, double m_I_value);

// Replicate-independent contraction over the rearrangement index:
// c_{k,j}(g) = sum_i W*_{i,k}(t_g) (1/(n h_r)) K~*((j/n - i/N)/h_r, i/N),
// stored banded over j with one row per (coordinate k, grid point g).
struct BootstrapCoefficients {
    int n = 0;
    int G = 0;
    int K = 0;
    std::vector<int> j_lo;
    std::vector<int> len;
    std::vector<std::size_t> offset;
    std::vector<double> values;

    int row_index(int k, int g) const { return k * G + g; }
    const double* row(int k, int g) const { return values.data() + offset[row_index(k, g)]; }
};

BootstrapCoefficients precompute_coefficients(
    const std::vector<rearrange::SortedGrid>& grids, const MonotoneFit& mono,
    const std::vector<const KernelRowTable*>& table_for_coord);

// Multiplies each banded row by Delta_{j,k} / sqrt(L), turning the replicate
// draw into a plain dot product against iid standard normals.
void fold_increments(BootstrapCoefficients& coeffs, const LongRunIncrements& inc);

// One bootstrap sup statistic: draws z_j ~ N(0,1) from the replicate's
// counter-based stream, forms V*_j = z_j Delta_j / sqrt(L), and returns
// max over rows of |sum_j c_{k,j}(g) V*_{j,k}|.
double draw_sup_stat(const BootstrapCoefficients& coeffs, const LongRunIncrements& inc,
                     std::uint64_t seed, std::uint64_t replicate);

// All B sup statistics, ordered by replicate index; bitwise identical for any
// thread count.
std::vector<double> sup_stats(const BootstrapCoefficients& folded, int B,
                              std::uint64_t seed, int threads);

// ceil((1-alpha) B)-th order statistic.
double empirical_quantile(const std::vector<double>& samples, double alpha);

// Algorithm for joint SCBs of a monotone trend panel. The config must carry
// resolved hr/hd/L (see tuning::resolve_trend_config).
ScbResult run_scb_trend(const TimeSeriesPanel& panel, const BandwidthConfig& config);

// Joint SCBs of the monotone contrast combinations of time-varying
// regression coefficients.
ScbResult run_scb_regression(const double* y, const double* x, int n, int p,
                             const linalg::Mat& contrast, const BandwidthConfig& config);

}  // namespace monoband::bootstrap
