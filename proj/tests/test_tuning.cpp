#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "monoband/lrcov.hpp"
#include "monoband/rng.hpp"
#include "monoband/simgen.hpp"
#include "monoband/tuning.hpp"

using namespace monoband;

TEST_CASE("candidate grid follows the rule") {
    const auto g500 = tuning::candidate_grid(500);
    REQUIRE(g500.size() == 12);
    CHECK(g500.front() == doctest::Approx(0.75 * std::pow(500.0, -0.2)).epsilon(1e-12));
    CHECK(g500.front() == doctest::Approx(0.217).epsilon(5e-3));
    CHECK(g500.back() == doctest::Approx(1.08 * std::pow(500.0, -0.2)).epsilon(1e-12));
    for (std::size_t i = 1; i < g500.size(); ++i) CHECK(g500[i] > g500[i - 1]);

    const auto g300 = tuning::candidate_grid(300);
    for (double h : g300) {
        CHECK(h > 0.0);
        CHECK(h < 0.5);
    }
}

TEST_CASE("gcv is scale equivariant and prefers large h on exact lines") {
    RandomStream s(41, 0);
    const int n = 300;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i)
        y[i] = std::exp(static_cast<double>(i + 1) / n) + 0.4 * s.normal();
    const auto cands = tuning::candidate_grid(n);
    const double pick = tuning::gcv_select_trend(y.data(), n, cands);
    std::vector<double> scaled(y);
    for (double& v : scaled) v *= 7.5;
    CHECK(tuning::gcv_select_trend(scaled.data(), n, cands) == pick);

    std::vector<double> line(n);
    for (int i = 0; i < n; ++i) line[i] = 1.0 + 2.0 * static_cast<double>(i + 1) / n;
    CHECK(tuning::gcv_select_trend(line.data(), n, cands) == cands.back());
}

TEST_CASE("panel gcv average lands in the reference selection band") {
    for (int n : {300, 500, 1000}) {
        simgen::DgpSpec spec;
        spec.model = simgen::Model::TrendA;
        spec.n = n;
        spec.p = 9;
        spec.seed = 1234;
        const TimeSeriesPanel panel = simgen::make_trend_panel(spec);
        const double hbar = tuning::gcv_select_panel(panel, tuning::candidate_grid(n));
        CHECK(hbar >= 0.1);
        CHECK(hbar <= 0.35);
    }
}

TEST_CASE("hd rule arithmetic") {
    CHECK(tuning::hd_default(0.2, 500) ==
          doctest::Approx(std::pow(0.04 + 0.1, 2.0 / 3.0)).epsilon(1e-12));
    CHECK(tuning::hd_default(0.05, 100000000) ==
          doctest::Approx(std::pow(0.05 * 0.05 + 1.0 / std::sqrt(1e8 * 0.05), 2.0 / 3.0))
              .epsilon(1e-12));
    // the rule shrinks with n and stays inside the admissible range
    for (double hr : {0.1, 0.2, 0.3, 0.45}) {
        CHECK(tuning::hd_default(hr, 500) > tuning::hd_default(hr, 100000));
        CHECK(tuning::hd_default(hr, 500) <= 0.45);
        CHECK(tuning::hd_default(hr, 500) > 0.0);
    }
}

TEST_CASE("mv selection: ties, scale equivariance, and the dense oracle") {
    const int n = 200, p = 2;
    // all-zero residuals: every window length gives the same (zero)
    // increments, so everything ties and the smallest candidate wins
    std::vector<double> res(static_cast<std::size_t>(n) * p, 0.0);
    const std::vector<int> cands = {3, 5, 7, 9, 11};
    CHECK(tuning::mv_select(res, n, p, cands) == 3);

    RandomStream s(42, 0);
    std::vector<double> noisy(static_cast<std::size_t>(n) * p);
    for (double& r : noisy) r = s.normal();
    const int pick = tuning::mv_select(noisy, n, p, cands);
    std::vector<double> scaled(noisy);
    for (double& r : scaled) r *= 3.0;
    CHECK(tuning::mv_select(scaled, n, p, cands) == pick);

    // dense functional sanity: zero when every window length gives the same
    // increment, scale-equivariant at degree two
    for (int j = 0; j < static_cast<int>(cands.size()); ++j) {
        const int lo = std::max(0, j - 3), hi = std::min<int>(cands.size() - 1, j + 3);
        for (int k : {11, 50, 137}) {
            const double dense = tuning::mv_se_dense(noisy, n, p, cands, lo, hi, k - 1);
            CHECK(dense >= 0.0);
            const double dense_scaled =
                tuning::mv_se_dense(scaled, n, p, cands, lo, hi, k - 1);
            CHECK(dense_scaled == doctest::Approx(9.0 * dense).epsilon(1e-9));
        }
    }
}

TEST_CASE("subspace selector equals a fully dense reimplementation") {
    RandomStream s(44, 0);
    const std::vector<int> cands = {3, 5, 7, 9, 12, 15};
    for (int p : {1, 2, 3}) {
        for (int rep = 0; rep < 6; ++rep) {
            const int n = 120 + static_cast<int>(s.uniform() * 120);
            std::vector<double> res(static_cast<std::size_t>(n) * p);
            for (double& r : res) r = s.normal();
            // dense MV: max over time of the dense se, then argmin over j
            int dense_pick = -1;
            double dense_best = 0.0;
            for (int j = 0; j < static_cast<int>(cands.size()); ++j) {
                const int lo = std::max(0, j - 3);
                const int hi = std::min<int>(cands.size() - 1, j + 3);
                double worst = 0.0;
                for (int k = cands.back(); k <= n; ++k)
                    worst = std::max(worst, tuning::mv_se_dense(res, n, p, cands, lo, hi, k - 1));
                if (dense_pick < 0 || worst < dense_best) {
                    dense_best = worst;
                    dense_pick = j;
                }
            }
            CHECK(tuning::mv_select(res, n, p, cands) == cands[dense_pick]);
        }
    }
}

TEST_CASE("mv lands inside the candidate range for iid noise") {
    int interior = 0;
    const int trials = 50;
    const int n = 2000;
    const int root = static_cast<int>(std::pow(n, 1.0 / 3.0));  // 12
    std::vector<int> cands;
    for (int l = root / 2; l <= 2 * root; ++l) cands.push_back(l);
    for (int rep = 0; rep < trials; ++rep) {
        RandomStream s(4300 + rep, 0);
        std::vector<double> res(n);
        for (double& r : res) r = s.normal();
        const int pick = tuning::mv_select(res, n, 1, cands);
        if (pick != cands.front() && pick != cands.back()) ++interior;
    }
    CHECK(interior >= trials * 8 / 10);
}

TEST_CASE("degenerate gcv surfaces when no candidate works") {
    RandomStream s(45, 0);
    std::vector<double> y(40);
    for (double& v : y) v = s.normal();
    CHECK_THROWS_AS(tuning::gcv_select_trend(y.data(), 40, {0.01, 0.02}), DegenerateGCV);
}

TEST_CASE("resolving an already resolved config is idempotent") {
    simgen::DgpSpec spec;
    spec.model = simgen::Model::TrendA;
    spec.n = 200;
    spec.p = 3;
    spec.seed = 31;
    const TimeSeriesPanel panel = simgen::make_trend_panel(spec);
    BandwidthConfig cfg;
    tuning::resolve_trend_config(panel, cfg);
    BandwidthConfig again = cfg;
    tuning::resolve_trend_config(panel, again);
    CHECK(again.hr == cfg.hr);
    CHECK(again.hd == cfg.hd);
    CHECK(again.L == cfg.L);
}

TEST_CASE("resolve fills every field") {
    simgen::DgpSpec spec;
    spec.model = simgen::Model::TrendA;
    spec.n = 300;
    spec.p = 3;
    spec.seed = 99;
    const TimeSeriesPanel panel = simgen::make_trend_panel(spec);
    BandwidthConfig cfg;
    tuning::resolve_trend_config(panel, cfg);
    REQUIRE(cfg.hr.size() == 1);
    REQUIRE(cfg.hd.size() == 1);
    CHECK(cfg.hd[0] == tuning::hd_default(cfg.hr[0], panel.n));
    CHECK(cfg.L >= 2);
    CHECK(cfg.G == 300);
    cfg.validate(panel.n, panel.p);
}
