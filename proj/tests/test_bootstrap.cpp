#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "monoband/bootstrap.hpp"
#include "monoband/errors.hpp"
#include "monoband/lrcov.hpp"
#include "monoband/rng.hpp"
#include "monoband/simgen.hpp"
#include "monoband/smoother.hpp"
#include "monoband/tuning.hpp"
#include "oracles.hpp"

using namespace monoband;

namespace {

// a small panel with monotone trends and AR noise
TimeSeriesPanel toy_panel(int n, int p, std::uint64_t seed, double noise = 0.3) {
    RandomStream s(seed, 0);
    TimeSeriesPanel panel;
    panel.n = n;
    panel.p = p;
    panel.y.resize(static_cast<std::size_t>(n) * p);
    for (int k = 0; k < p; ++k) {
        double state = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i + 1) / n;
            state = 0.3 * state + noise * s.normal();
            panel.col(k)[i] = (1.0 + 0.2 * k) * (t + 0.4 * t * t) + state;
        }
    }
    return panel;
}

struct SmallPipeline {
    SmootherFit fit;
    MonotoneFit mono;
    std::vector<rearrange::SortedGrid> grids;
    LongRunIncrements inc;
    bootstrap::KernelRowTable table;
    bootstrap::BootstrapCoefficients coeffs;
    double hr;
    std::vector<double> hd;
};

SmallPipeline build_small(const TimeSeriesPanel& panel, double hr, double hd, int N, int G,
                          int L) {
    SmallPipeline out;
    out.hr = hr;
    out.hd = {hd};
    out.fit = smoother::fit_panel(panel, {hr}, N);
    out.mono = rearrange::rearrange_panel(out.fit, out.hd, G, &out.grids);
    const auto mt = smoother::fit_at_observations(panel, {hr});
    const auto res = smoother::residuals_trend(panel, mt);
    out.inc = lrcov::cum_increments(res, panel.n, panel.p, L);
    out.table = bootstrap::build_row_table(panel.n, N, hr);
    std::vector<const bootstrap::KernelRowTable*> tables(panel.p, &out.table);
    out.coeffs = bootstrap::precompute_coefficients(out.grids, out.mono, tables);
    return out;
}

}  // namespace

TEST_CASE("weight rows: normalization and dense equality") {
    RandomStream s(51, 0);
    const int N = 300;
    std::vector<double> m(N);
    for (int i = 0; i < N; ++i)
        m[i] = static_cast<double>(i + 1) / N + 0.02 * s.normal();
    const double hd = 0.06;
    const auto grid = rearrange::make_sorted_grid(m.data(), N, hd);
    for (int q = 0; q < 20; ++q) {
        const double v0 = 0.2 + 0.6 * s.uniform();
        const auto row = bootstrap::weights_row(grid, v0);
        double total = 0.0;
        std::vector<double> dense(N, 0.0);
        double dense_total = 0.0;
        for (int i = 0; i < N; ++i) {
            dense[i] = oracles::epanechnikov((m[i] - v0) / hd);
            dense_total += dense[i];
        }
        for (std::size_t r = 0; r < row.grid_idx.size(); ++r) {
            total += row.w[r];
            CHECK(row.w[r] ==
                  doctest::Approx(dense[row.grid_idx[r]] / dense_total).epsilon(1e-12));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    // a value far outside the data range has no mass
    CHECK_THROWS_AS(bootstrap::weights_row(grid, 50.0), EmptyWeightRow);
}

TEST_CASE("coefficients match the naive double sum on a toy problem") {
    const TimeSeriesPanel panel = toy_panel(50, 2, 777);
    const auto pipe = build_small(panel, 0.3, 0.1, 200, 3, 4);
    const auto& coeffs = pipe.coeffs;

    for (int k = 0; k < 2; ++k) {
        const double hd = 0.1;
        for (int g = 0; g < 3; ++g) {
            const double v0 = pipe.mono.m_I[static_cast<std::size_t>(k) * 3 + g];
            // dense weights over all grid points
            std::vector<double> w(200, 0.0);
            double total = 0.0;
            for (int i = 0; i < 200; ++i) {
                w[i] = oracles::epanechnikov((pipe.fit.mtilde_col(k)[i] - v0) / hd);
                total += w[i];
            }
            for (int j = 0; j < 50; ++j) {
                double naive = 0.0;
                for (int i = 0; i < 200; ++i) {
                    if (w[i] <= 0.0) continue;
                    const double u = static_cast<double>(i + 1) / 200.0;
                    const double nu0 = kernels::nu_moment({}, 0, u, pipe.hr);
                    const double nu1 = kernels::nu_moment({}, 1, u, pipe.hr);
                    const double nu2 = kernels::nu_moment({}, 2, u, pipe.hr);
                    const double x = (static_cast<double>(j + 1) / 50.0 - u) / pipe.hr;
                    naive += (w[i] / total) * (nu2 - nu1 * x) * oracles::jackknife_kernel(x) /
                             (nu0 * nu2 - nu1 * nu1) / (50.0 * pipe.hr);
                }
                const int r = coeffs.row_index(k, g);
                double got = 0.0;
                if (j >= coeffs.j_lo[r] && j < coeffs.j_lo[r] + coeffs.len[r])
                    got = coeffs.row(k, g)[j - coeffs.j_lo[r]];
                CHECK(got == doctest::Approx(naive).epsilon(5e-9).scale(1.0));
            }
        }
    }
}

TEST_CASE("optimized sup statistic equals the fully naive reference") {
    RandomStream pick(52, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 30 + static_cast<int>(pick.uniform() * 30);
        const int p = 1 + static_cast<int>(pick.uniform() * 3);
        const int N = 120 + static_cast<int>(pick.uniform() * 180);
        const int G = 4 + static_cast<int>(pick.uniform() * 16);
        const int L = 2 + static_cast<int>(pick.uniform() * 5);
        // keep n*h/sqrt(2) above the degeneracy refusal line
        const double hr_min = std::max(0.28, 11.5 / n);
        const double hr = hr_min + (0.45 - hr_min) * pick.uniform();
        const double hd = 0.08 + 0.04 * pick.uniform();
        const TimeSeriesPanel panel = toy_panel(n, p, 1000 + rep);
        SmallPipeline pipe;
        try {
            pipe = build_small(panel, hr, hd, N, G, L);
        } catch (const EmptyDomain&) {
            continue;  // tiny panels occasionally have no valid domain
        }
        auto folded = pipe.coeffs;
        bootstrap::fold_increments(folded, pipe.inc);

        const std::uint64_t seed = 9000 + rep;
        const auto sup = bootstrap::sup_stats(folded, 3, seed, 1);
        for (std::uint64_t r = 0; r < 3; ++r) {
            const double direct = bootstrap::draw_sup_stat(pipe.coeffs, pipe.inc, seed, r);
            const double naive =
                oracles::naive_sup_stat(pipe.fit, pipe.mono, pipe.hd, pipe.inc, hr, seed, r);
            CHECK(sup[r] == doctest::Approx(direct).epsilon(1e-12));
            CHECK(sup[r] == doctest::Approx(naive).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("sup stats: determinism, zero residuals, and scaling") {
    const TimeSeriesPanel panel = toy_panel(60, 2, 321);
    auto pipe = build_small(panel, 0.3, 0.1, 240, 8, 5);

    auto folded = pipe.coeffs;
    bootstrap::fold_increments(folded, pipe.inc);
    const auto one = bootstrap::sup_stats(folded, 97, 5, 1);
    const auto four = bootstrap::sup_stats(folded, 97, 5, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i] == four[i]);

    // zero residuals -> all-zero statistics
    LongRunIncrements zero = pipe.inc;
    std::fill(zero.factors.begin(), zero.factors.end(), 0.0);
    auto zfold = pipe.coeffs;
    bootstrap::fold_increments(zfold, zero);
    for (double v : bootstrap::sup_stats(zfold, 16, 5, 1)) CHECK(v == 0.0);

    // scaling the residual factors scales every statistic linearly
    LongRunIncrements scaled = pipe.inc;
    for (double& f : scaled.factors) f *= 2.5;
    auto sfold = pipe.coeffs;
    bootstrap::fold_increments(sfold, scaled);
    const auto base = bootstrap::sup_stats(folded, 33, 5, 1);
    const auto twice = bootstrap::sup_stats(sfold, 33, 5, 1);
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(twice[i] == doctest::Approx(2.5 * base[i]).epsilon(1e-12));
}

TEST_CASE("empirical quantile order statistics") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i);
    CHECK(bootstrap::empirical_quantile(v, 0.05) == 95.0);
    CHECK(bootstrap::empirical_quantile({2.0, 1.0}, 0.5) == 1.0);
    CHECK(bootstrap::empirical_quantile(std::vector<double>(37, 4.2), 0.17) == 4.2);
    // q is nonincreasing in alpha
    CHECK(bootstrap::empirical_quantile(v, 0.05) >= bootstrap::empirical_quantile(v, 0.10));
}

TEST_CASE("trend bands: geometry, determinism, and noiseless collapse") {
    const TimeSeriesPanel panel = toy_panel(120, 2, 88);
    BandwidthConfig cfg;
    cfg.hr = {0.25};
    cfg.hd = {0.1};
    cfg.N = 400;
    cfg.L = 5;
    cfg.B = 200;
    cfg.G = 40;
    cfg.seed = 11;
    const ScbResult scb = bootstrap::run_scb_trend(panel, cfg);
    REQUIRE(scb.G == 40);
    for (double a : cfg.alpha)
        for (int k = 0; k < scb.K; ++k)
            for (int g = 0; g < scb.G; ++g) {
                CHECK(scb.upper(g, k, a) - scb.lower(g, k, a) ==
                      doctest::Approx(2.0 * scb.q_hat.at(a)).epsilon(1e-12));
                CHECK(scb.estimate_at(g, k) > scb.lower(g, k, a));
                CHECK(scb.estimate_at(g, k) < scb.upper(g, k, a));
            }
    CHECK(scb.q_hat.at(0.05) >= scb.q_hat.at(0.10));
    // monotone estimates along the grid
    for (int k = 0; k < scb.K; ++k)
        for (int g = 1; g < scb.G; ++g)
            CHECK(scb.estimate_at(g, k) >= scb.estimate_at(g - 1, k) - 1e-12);

    BandwidthConfig threaded = cfg;
    threaded.threads = 3;
    const ScbResult again = bootstrap::run_scb_trend(panel, threaded);
    for (int i = 0; i < scb.B; ++i) CHECK(scb.sup_samples[i] == again.sup_samples[i]);

    // noiseless monotone panel (affine, so the smoother reproduces it
    // exactly): residuals vanish and the bands hug the estimate
    TimeSeriesPanel clean;
    clean.n = 200;
    clean.p = 1;
    clean.y.resize(200);
    for (int i = 0; i < 200; ++i) clean.y[i] = 0.3 + 2.0 * (i + 1.0) / 200.0;
    BandwidthConfig ccfg = cfg;
    ccfg.N = 500;
    const ScbResult tight = bootstrap::run_scb_trend(clean, ccfg);
    CHECK(tight.q_hat.at(0.05) < 1e-6);
}

TEST_CASE("grid robustness: doubling G moves the quantile by under a percent") {
    simgen::DgpSpec spec;
    spec.model = simgen::Model::TrendA;
    spec.n = 300;
    spec.p = 9;
    spec.seed = 2024;
    const TimeSeriesPanel panel = simgen::make_trend_panel(spec);
    BandwidthConfig cfg;
    tuning::resolve_trend_config(panel, cfg);
    cfg.B = 500;
    cfg.seed = 5;
    cfg.G = 300;
    const ScbResult base = bootstrap::run_scb_trend(panel, cfg);
    cfg.G = 600;
    const ScbResult fine = bootstrap::run_scb_trend(panel, cfg);
    for (double a : cfg.alpha)
        CHECK(std::fabs(fine.q_hat.at(a) - base.q_hat.at(a)) / base.q_hat.at(a) < 0.01);
}

TEST_CASE("regression bands on a selection contrast") {
    simgen::DgpSpec spec;
    spec.model = simgen::Model::RegC;
    spec.n = 300;
    spec.seed = 7;
    const auto data = simgen::make_regression(spec);
    BandwidthConfig cfg;
    cfg.hr = {0.25};
    cfg.hd = {0.1};
    cfg.L = 6;
    cfg.B = 300;
    cfg.G = 50;
    cfg.seed = 3;
    linalg::Mat pick(1, 2);
    pick(0, 1) = 1.0;  // second coefficient only
    const ScbResult scb =
        bootstrap::run_scb_regression(data.y.data(), data.x.data(), data.n, 2, pick, cfg);
    CHECK(scb.K == 1);
    for (int g = 1; g < scb.G; ++g)
        CHECK(scb.estimate_at(g, 0) >= scb.estimate_at(g - 1, 0) - 1e-12);
    // the monotone estimate of m2(t) = exp(t) should sit in a sane range
    CHECK(scb.estimate_at(0, 0) > 0.5);
    CHECK(scb.estimate_at(scb.G - 1, 0) < 4.0);
}
