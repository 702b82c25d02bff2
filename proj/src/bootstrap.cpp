#include "monoband/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "monoband/errors.hpp"
#include "monoband/kernels.hpp"
#include "monoband/rng.hpp"
#include "monoband/simd.hpp"
#include "monoband/smoother.hpp"
#include "monoband/lrcov.hpp"

namespace monoband::bootstrap {

KernelRowTable build_row_table(int n, int N, double h) {
    KernelRowTable table;
    table.n = n;
    table.N = N;
    table.h = h;
    table.j_lo.resize(N);
    table.len.resize(N);
    table.offset.resize(N);
    const kernels::KernelSpec spec{};
    const double inv_nh = 1.0 / (n * h);
    std::size_t total = 0;
    for (int i = 0; i < N; ++i) {
        const double u = static_cast<double>(i + 1) / N;
        int j0 = std::max(0, static_cast<int>(std::ceil(n * (u - h) - 1e-12)) - 1);
        int j1 = std::min(n - 1, static_cast<int>(std::floor(n * (u + h) + 1e-12)) - 1);
        if (j1 < j0) j1 = j0 - 1;
        table.j_lo[i] = j0;
        table.len[i] = j1 - j0 + 1;
        table.offset[i] = total;
        total += table.len[i];
    }
    table.values.resize(total);
    for (int i = 0; i < N; ++i) {
        const double u = static_cast<double>(i + 1) / N;
        double* row = table.values.data() + table.offset[i];
        const bool interior = (u >= h && u <= 1.0 - h);
        kernels::BoundaryMoments bm{1.0, 0.0, kernels::kKappa2, kernels::kKappa2};
        if (!interior) {
            bm = kernels::boundary_moments(spec, u, h);
            if (bm.c <= 1e-12)
                throw DegenerateMoments("kernel moment determinant collapsed at grid point");
        }
        for (int r = 0; r < table.len[i]; ++r) {
            const double tj = static_cast<double>(table.j_lo[i] + r + 1) / n;
            const double x = (tj - u) / h;
            const double ktilde = kernels::jackknife_kernel(spec, x);
            row[r] = inv_nh * (interior ? ktilde : (bm.nu2 - bm.nu1 * x) * ktilde / bm.c);
        }
    }
    return table;
}

WeightRow weights_row(const rearrange::SortedGrid& grid, double m_I_value) {
    const double hd = grid.hd;
    const auto begin = grid.values.begin();
    const auto lo = std::upper_bound(begin, grid.values.end(), m_I_value - hd);
    const auto hi = std::lower_bound(lo, grid.values.end(), m_I_value + hd);
    WeightRow row;
    double total = 0.0;
    for (auto it = lo; it != hi; ++it) {
        const double w = kernels::kernel_eval({}, (*it - m_I_value) / hd);
        if (w <= 0.0) continue;
        row.grid_idx.push_back(grid.perm[it - begin]);
        row.w.push_back(w);
        total += w;
    }
    if (!(total > 1e-250))
        throw EmptyWeightRow("rearrangement weight row has no mass; point outside domain");
    for (double& w : row.w) w /= total;
    return row;
}

namespace {

// sorted-slice support of the weight row, as indices into the sorted order
struct SupportSlice {
    int lo;
    int hi;  // half open
};

SupportSlice weight_support(const rearrange::SortedGrid& grid, double m_I_value) {
    const auto begin = grid.values.begin();
    const auto lo = std::upper_bound(begin, grid.values.end(), m_I_value - grid.hd);
    const auto hi = std::lower_bound(lo, grid.values.end(), m_I_value + grid.hd);
    return {static_cast<int>(lo - begin), static_cast<int>(hi - begin)};
}

}  // namespace

BootstrapCoefficients precompute_coefficients(
    const std::vector<rearrange::SortedGrid>& grids, const MonotoneFit& mono,
    const std::vector<const KernelRowTable*>& table_for_coord) {
    const int K = mono.K;
    const int G = mono.G;
    const int n = table_for_coord.front()->n;
    BootstrapCoefficients coeffs;
    coeffs.n = n;
    coeffs.G = G;
    coeffs.K = K;
    const int rows = K * G;
    coeffs.j_lo.resize(rows);
    coeffs.len.resize(rows);
    coeffs.offset.resize(rows);

    std::size_t total = 0;
    for (int k = 0; k < K; ++k) {
        const KernelRowTable& table = *table_for_coord[k];
        for (int g = 0; g < G; ++g) {
            const int r = coeffs.row_index(k, g);
            const SupportSlice s =
                weight_support(grids[k], mono.m_I[static_cast<std::size_t>(k) * G + g]);
            int j0 = n, j1 = -1;
            for (int q = s.lo; q < s.hi; ++q) {
                const int i = grids[k].perm[q];
                j0 = std::min(j0, table.j_lo[i]);
                j1 = std::max(j1, table.j_lo[i] + table.len[i] - 1);
            }
            if (j1 < j0) {
                j0 = 0;
                j1 = -1;
            }
            coeffs.j_lo[r] = j0;
            coeffs.len[r] = j1 - j0 + 1;
            coeffs.offset[r] = total;
            total += coeffs.len[r];
        }
    }
    coeffs.values.assign(total, 0.0);
    const auto& ops = simd::active_ops();
    for (int k = 0; k < K; ++k) {
        const KernelRowTable& table = *table_for_coord[k];
        for (int g = 0; g < G; ++g) {
            const int r = coeffs.row_index(k, g);
            const double v0 = mono.m_I[static_cast<std::size_t>(k) * G + g];
            const SupportSlice s = weight_support(grids[k], v0);
            double mass = 0.0;
            for (int q = s.lo; q < s.hi; ++q)
                mass += kernels::kernel_eval({}, (grids[k].values[q] - v0) / grids[k].hd);
            if (!(mass > 1e-250))
                throw EmptyWeightRow("rearrangement weight row has no mass");
            double* dst = coeffs.values.data() + coeffs.offset[r];
            for (int q = s.lo; q < s.hi; ++q) {
                const double w =
                    kernels::kernel_eval({}, (grids[k].values[q] - v0) / grids[k].hd) / mass;
                if (w <= 0.0) continue;
                const int i = grids[k].perm[q];
                ops.axpy(w, table.row(i), dst + (table.j_lo[i] - coeffs.j_lo[r]),
                         table.len[i]);
            }
        }
    }
    return coeffs;
}

void fold_increments(BootstrapCoefficients& coeffs, const LongRunIncrements& inc) {
    const double inv_sqrt_l = 1.0 / std::sqrt(static_cast<double>(inc.L));
    for (int k = 0; k < coeffs.K; ++k) {
        const double* delta = inc.factor_col(k);
        for (int g = 0; g < coeffs.G; ++g) {
            const int r = coeffs.row_index(k, g);
            double* row = coeffs.values.data() + coeffs.offset[r];
            const int j0 = coeffs.j_lo[r];
            for (int j = 0; j < coeffs.len[r]; ++j) row[j] *= delta[j0 + j] * inv_sqrt_l;
        }
    }
}

double draw_sup_stat(const BootstrapCoefficients& coeffs, const LongRunIncrements& inc,
                     std::uint64_t seed, std::uint64_t replicate) {
    const RandomStream stream(seed, stream_id::compose(stream_id::kBootstrap, replicate));
    const int n = coeffs.n;
    const double inv_sqrt_l = 1.0 / std::sqrt(static_cast<double>(inc.L));
    std::vector<double> z(n);
    for (int j = 0; j < n; ++j) z[j] = stream.normal_at(j);

    std::vector<double> vstar(static_cast<std::size_t>(n));
    const auto& ops = simd::active_ops();
    double best = 0.0;
    for (int k = 0; k < coeffs.K; ++k) {
        const double* delta = inc.factor_col(k);
        for (int j = 0; j < n; ++j) vstar[j] = z[j] * delta[j] * inv_sqrt_l;
        for (int g = 0; g < coeffs.G; ++g) {
            const int r = coeffs.row_index(k, g);
            const double s = ops.dot(coeffs.values.data() + coeffs.offset[r],
                                     vstar.data() + coeffs.j_lo[r], coeffs.len[r]);
            best = std::max(best, std::fabs(s));
        }
    }
    return best;
}

namespace {

void sup_stats_block_range(const BootstrapCoefficients& folded, int B, std::uint64_t seed,
                           int block_begin, int block_end, std::vector<double>* out) {
    const int n = folded.n;
    const auto& ops = simd::active_ops();
    std::vector<double> zblock(static_cast<std::size_t>(n) * simd::kBlock);
    double dots[simd::kBlock];
    for (int b = block_begin; b < block_end; ++b) {
        const int r0 = b * simd::kBlock;
        const int live = std::min(simd::kBlock, B - r0);
        for (int r = 0; r < simd::kBlock; ++r) {
            if (r < live) {
                const RandomStream stream(
                    seed, stream_id::compose(stream_id::kBootstrap,
                                             static_cast<std::uint64_t>(r0 + r)));
                for (int j = 0; j < n; ++j) zblock[static_cast<std::size_t>(j) * simd::kBlock + r] =
                    stream.normal_at(j);
            } else {
                for (int j = 0; j < n; ++j)
                    zblock[static_cast<std::size_t>(j) * simd::kBlock + r] = 0.0;
            }
        }
        double best[simd::kBlock] = {0.0};
        const int rows = folded.K * folded.G;
        for (int row = 0; row < rows; ++row) {
            ops.row_dots(folded.values.data() + folded.offset[row], folded.len[row],
                         zblock.data() + static_cast<std::size_t>(folded.j_lo[row]) * simd::kBlock,
                         dots);
            for (int r = 0; r < live; ++r) best[r] = std::max(best[r], std::fabs(dots[r]));
        }
        for (int r = 0; r < live; ++r) (*out)[r0 + r] = best[r];
    }
}

}  // namespace

std::vector<double> sup_stats(const BootstrapCoefficients& folded, int B,
                              std::uint64_t seed, int threads) {
    std::vector<double> out(B, 0.0);
    const int nblocks = (B + simd::kBlock - 1) / simd::kBlock;
    threads = std::max(1, std::min(threads, nblocks));
    if (threads == 1) {
        sup_stats_block_range(folded, B, seed, 0, nblocks, &out);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        const int begin = static_cast<int>(static_cast<long long>(nblocks) * t / threads);
        const int end = static_cast<int>(static_cast<long long>(nblocks) * (t + 1) / threads);
        pool.emplace_back(sup_stats_block_range, std::cref(folded), B, seed, begin, end, &out);
    }
    for (auto& th : pool) th.join();
    return out;
}

double empirical_quantile(const std::vector<double>& samples, double alpha) {
    if (samples.empty()) throw InvalidConfig("empty bootstrap sample");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidConfig("alpha must lie in (0,1)");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const int b = static_cast<int>(sorted.size());
    int idx = static_cast<int>(std::ceil((1.0 - alpha) * b - 1e-9));
    idx = std::clamp(idx, 1, b);
    return sorted[idx - 1];
}

namespace {

ScbResult assemble(const MonotoneFit& mono, const std::vector<double>& sup,
                   const BandwidthConfig& config, int n) {
    ScbResult res;
    res.n = n;
    res.K = mono.K;
    res.G = mono.G;
    res.B = static_cast<int>(sup.size());
    res.alpha = config.alpha;
    res.sup_samples = sup;
    for (double a : config.alpha) res.q_hat[a] = empirical_quantile(sup, a);
    res.domain = mono.domain;
    res.eval_grid = mono.eval_grid;
    res.estimate = mono.m_I;
    res.seed = config.seed;
    res.config = config;
    return res;
}

}  // namespace

ScbResult run_scb_trend(const TimeSeriesPanel& panel, const BandwidthConfig& config) {
    panel.validate();
    config.validate(panel.n, panel.p);
    const int G = config.G > 0 ? config.G : std::min(400, panel.n);

    const SmootherFit fit = smoother::fit_panel(panel, config.hr, config.N);
    std::vector<rearrange::SortedGrid> grids;
    MonotoneFit mono = rearrange::rearrange_panel(fit, config.hd, G, &grids);

    const std::vector<double> mt_obs = smoother::fit_at_observations(panel, config.hr);
    const std::vector<double> res = smoother::residuals_trend(panel, mt_obs);
    const LongRunIncrements inc = lrcov::cum_increments(res, panel.n, panel.p, config.L);

    // one kernel row table per distinct bandwidth
    std::vector<KernelRowTable> tables;
    tables.reserve(panel.p);
    std::vector<const KernelRowTable*> table_for_coord(panel.p);
    for (int k = 0; k < panel.p; ++k) {
        const double h = config.hr_at(k);
        const KernelRowTable* found = nullptr;
        for (const auto& t : tables)
            if (t.h == h) found = &t;
        if (found == nullptr) {
            tables.push_back(build_row_table(panel.n, config.N, h));
            found = &tables.back();
        }
        table_for_coord[k] = found;
    }

    BootstrapCoefficients coeffs = precompute_coefficients(grids, mono, table_for_coord);
    fold_increments(coeffs, inc);
    const std::vector<double> sup = sup_stats(coeffs, config.B, config.seed, config.threads);
    return assemble(mono, sup, config, panel.n);
}

ScbResult run_scb_regression(const double* y, const double* x, int n, int p,
                             const linalg::Mat& contrast, const BandwidthConfig& config) {
    if (contrast.cols != p) throw InvalidConfig("contrast column count must equal p");
    config.validate(n, contrast.rows);
    const int s = contrast.rows;
    const int G = config.G > 0 ? config.G : std::min(400, n);
    const double hr = config.hr[0];
    const double hd = config.hd[0];

    // jackknife coefficient estimates on the rearrangement grid, contrasted
    const std::vector<double> grid = smoother::grid_times(config.N);
    const smoother::RegFit gridfit = smoother::jackknife_regression(y, x, n, p, hr, grid);
    SmootherFit fit;
    fit.N = config.N;
    fit.p = s;
    fit.grid = grid;
    fit.hr = {hr};
    fit.mtilde.assign(static_cast<std::size_t>(config.N) * s, 0.0);
    fit.mhat = fit.mtilde;
    for (int k = 0; k < s; ++k)
        for (int i = 0; i < config.N; ++i) {
            double acc = 0.0;
            for (int c = 0; c < p; ++c)
                acc += contrast(k, c) * gridfit.level[static_cast<std::size_t>(c) * config.N + i];
            fit.mtilde[static_cast<std::size_t>(k) * config.N + i] = acc;
        }

    std::vector<rearrange::SortedGrid> grids;
    MonotoneFit mono = rearrange::rearrange_panel(fit, {hd}, G, &grids);

    // residuals from the uncontrasted coefficient estimates at the data times
    const std::vector<double> obs = smoother::observation_times(n);
    const smoother::RegFit obsfit = smoother::jackknife_regression(y, x, n, p, hr, obs);
    std::vector<double> mt(static_cast<std::size_t>(n) * p);
    for (int k = 0; k < p; ++k)
        for (int i = 0; i < n; ++i)
            mt[static_cast<std::size_t>(k) * n + i] =
                obsfit.level[static_cast<std::size_t>(k) * n + i];
    const std::vector<double> res = smoother::residuals_regression(y, x, n, p, mt);
    const LongRunIncrements inc =
        lrcov::sigma_c_factors(x, n, p, res, contrast, config.L, hr, config.ridge);

    const KernelRowTable table = build_row_table(n, config.N, hr);
    std::vector<const KernelRowTable*> table_for_coord(s, &table);
    BootstrapCoefficients coeffs = precompute_coefficients(grids, mono, table_for_coord);
    fold_increments(coeffs, inc);
    const std::vector<double> sup = sup_stats(coeffs, config.B, config.seed, config.threads);
    return assemble(mono, sup, config, n);
}

}  // namespace monoband::bootstrap
