// Acceptance suite: one pass/fail line per criterion. `--smoke` runs the
// reduced Monte Carlo protocol (fewer runs, smaller bootstrap, wider
// tolerance) plus the fast structural criteria; the default runs everything
// at the full published protocol.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "monoband/bootstrap.hpp"
#include "monoband/kernels.hpp"
#include "monoband/lrcov.hpp"
#include "monoband/penalize.hpp"
#include "monoband/rearrange.hpp"
#include "monoband/rng.hpp"
#include "monoband/simgen.hpp"
#include "monoband/smoother.hpp"
#include "monoband/tuning.hpp"
#include "oracles.hpp"

using namespace monoband;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  %s  (%s)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

bool within(double value, double target, double tol) {
    return std::fabs(value - target) <= tol + 1e-9;
}

simgen::StudyResult run_study(simgen::Model model, int n, int p, int runs, int B,
                              std::uint64_t seed, double penalize_c1 = 0.0) {
    simgen::StudySpec spec;
    spec.dgp.model = model;
    spec.dgp.n = n;
    spec.dgp.p = p;
    spec.dgp.seed = seed;
    spec.runs = runs;
    spec.config.B = B;
    spec.threads = 2;
    if (const char* env = std::getenv("MONOBAND_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) spec.threads = t;
    }
    if (penalize_c1 > 0.0)
        spec.penalty = penalize::PenaltyConfig::from_c1(penalize_c1);
    return simgen::coverage_study(spec);
}

std::string cov_detail(const simgen::StudyResult& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "cov90=%.3f cov95=%.3f width90=%.4f width95=%.4f failures=%d",
                  r.coverage.at(0.10), r.coverage.at(0.05), r.mean_width.at(0.10),
                  r.mean_width.at(0.05), r.failures);
    return buf;
}

void criterion_1_and_3(bool smoke) {
    const int runs = smoke ? 200 : 400;
    const int B = smoke ? 1000 : 2000;
    const double tol = smoke ? 0.07 : 0.05;
    const auto r = run_study(simgen::Model::TrendA, 500, 9, runs, B, 101);
    report(smoke ? "criterion 1 (smoke): coverage, trend model (a) n=500 p=9"
                 : "criterion 1: coverage, trend model (a) n=500 p=9",
           within(r.coverage.at(0.10), 0.843, tol) && within(r.coverage.at(0.05), 0.930, tol) &&
               r.failures == 0,
           cov_detail(r));
    report(smoke ? "criterion 3 (smoke): width, trend model (a) n=500 p=9"
                 : "criterion 3: width, trend model (a) n=500 p=9",
           within(r.mean_width.at(0.10), 0.2541, 0.1 * 0.2541) &&
               within(r.mean_width.at(0.05), 0.2840, 0.1 * 0.2840),
           cov_detail(r));
}

void criterion_2(bool smoke) {
    const int runs = smoke ? 100 : 400;
    const int B = smoke ? 1000 : 2000;
    const double tol = smoke ? 0.08 : 0.05;
    const auto r = run_study(simgen::Model::TrendB, 1000, 27, runs, B, 102);
    report("criterion 2: coverage, trend model (b) n=1000 p=27",
           within(r.coverage.at(0.10), 0.930, tol) && within(r.coverage.at(0.05), 0.970, tol) &&
               r.failures == 0,
           cov_detail(r));
}

void criterion_4(bool smoke) {
    const int runs = smoke ? 100 : 400;
    const int B = smoke ? 1000 : 2000;
    const double tol = smoke ? 0.08 : 0.05;
    const auto rc = run_study(simgen::Model::RegC, 500, 2, runs, B, 103);
    const auto rd = run_study(simgen::Model::RegD, 1000, 2, runs, B, 104);
    report("criterion 4: coverage, regression models (c) n=500 and (d) n=1000",
           within(rc.coverage.at(0.10), 0.880, tol) && within(rc.coverage.at(0.05), 0.935, tol) &&
               within(rd.coverage.at(0.10), 0.900, tol) &&
               within(rd.coverage.at(0.05), 0.953, tol) && rc.failures == 0 && rd.failures == 0,
           "(c) " + cov_detail(rc) + "; (d) " + cov_detail(rd));
}

void criterion_5(bool smoke) {
    const int runs = smoke ? 100 : 400;
    const int B = smoke ? 1000 : 2000;
    const double tol = smoke ? 0.08 : 0.05;
    const auto pen = run_study(simgen::Model::WeakMonotone, 500, 27, runs, B, 105, 0.3);
    const auto raw = run_study(simgen::Model::WeakMonotone, 500, 27, runs, B, 105);
    const bool ok = within(pen.coverage.at(0.10), 0.865, tol) &&
                    within(pen.coverage.at(0.05), 0.950, tol) &&
                    within(pen.mean_width.at(0.10), 0.3340, 0.1 * 0.3340) &&
                    within(pen.mean_width.at(0.05), 0.3700, 0.1 * 0.3700) &&
                    raw.coverage.at(0.10) <= 0.82 + (smoke ? 0.03 : 0.0);
    report("criterion 5: penalized vs plain bands on weakly monotone trends n=500 p=27", ok,
           "penalized " + cov_detail(pen) + "; plain " + cov_detail(raw));
}

void criterion_6(bool smoke) {
    const int runs = smoke ? 100 : 400;
    const int B = smoke ? 1000 : 2000;
    const double tol = smoke ? 0.08 : 0.05;
    const auto r = run_study(simgen::Model::SkewExp, 500, 27, runs, B, 106);
    report("criterion 6: coverage under skewed exponential innovations n=500 p=27",
           within(r.coverage.at(0.10), 0.895, tol) && within(r.coverage.at(0.05), 0.950, tol) &&
               r.failures == 0,
           cov_detail(r));
}

// --- criterion 7: oracle equivalence on small random instances ---------

TimeSeriesPanel random_panel(int n, int p, std::uint64_t seed) {
    RandomStream s(seed, 0);
    TimeSeriesPanel panel;
    panel.n = n;
    panel.p = p;
    panel.y.resize(static_cast<std::size_t>(n) * p);
    for (int k = 0; k < p; ++k) {
        double state = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i + 1) / n;
            state = 0.3 * state + 0.3 * s.normal();
            panel.col(k)[i] = (1.0 + 0.2 * k) * (t + 0.4 * t * t) + state;
        }
    }
    return panel;
}

void criterion_7() {
    RandomStream pick(7000, 0);
    int instances = 0;
    double worst_boot = 0.0, worst_ll = 0.0, worst_rearr = 0.0;
    bool ok = true;
    while (instances < 50) {
        const int n = 30 + static_cast<int>(pick.uniform() * 30);
        const int p = 1 + static_cast<int>(pick.uniform() * 3);
        const int N = 120 + static_cast<int>(pick.uniform() * 180);
        const int G = 4 + static_cast<int>(pick.uniform() * 16);
        const int L = 2 + static_cast<int>(pick.uniform() * 5);
        const double hr_min = std::max(0.28, 11.5 / n);
        const double hr = hr_min + (0.45 - hr_min) * pick.uniform();
        const double hd = 0.08 + 0.04 * pick.uniform();
        const TimeSeriesPanel panel = random_panel(n, p, 7100 + instances);

        SmootherFit fit;
        MonotoneFit mono;
        std::vector<rearrange::SortedGrid> grids;
        try {
            fit = smoother::fit_panel(panel, {hr}, N);
            mono = rearrange::rearrange_panel(fit, {hd}, G, &grids);
        } catch (const EmptyDomain&) {
            continue;
        }
        ++instances;

        // local-linear vs the dense normal-equation oracle
        const double at = 0.3 + 0.4 * pick.uniform();
        const auto ll = smoother::ll_trend(panel.col(0), n, hr, {at});
        double lvl, der;
        oracles::dense_local_linear(panel.col(0), n, hr, at, &lvl, &der);
        worst_ll = std::max(worst_ll, std::fabs(ll.level[0] - lvl) / std::max(1.0, std::fabs(lvl)));

        // rearranged inverse vs the dense Riemann sum
        const double s_at = mono.m_I[static_cast<std::size_t>(0) * G + G / 2];
        worst_rearr = std::max(
            worst_rearr, std::fabs(rearranged_inverse(grids[0], s_at) -
                                   oracles::dense_rearranged_inverse(fit.mtilde_col(0), N, hd, s_at)));

        const auto mt = smoother::fit_at_observations(panel, {hr});
        const auto res = smoother::residuals_trend(panel, mt);
        const auto inc = lrcov::cum_increments(res, n, p, L);
        const auto table = bootstrap::build_row_table(n, N, hr);
        std::vector<const bootstrap::KernelRowTable*> tables(p, &table);
        auto coeffs = bootstrap::precompute_coefficients(grids, mono, tables);
        auto folded = coeffs;
        bootstrap::fold_increments(folded, inc);
        const auto sup = bootstrap::sup_stats(folded, 2, 7200 + instances, 1);
        for (std::uint64_t r = 0; r < 2; ++r) {
            const double naive =
                oracles::naive_sup_stat(fit, mono, {hd}, inc, hr, 7200 + instances, r);
            worst_boot = std::max(worst_boot, std::fabs(sup[r] - naive));
        }
    }
    ok = worst_boot < 1e-8 && worst_ll < 1e-10 && worst_rearr < 1e-10;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "max |opt-naive|: bootstrap %.2e, local-linear %.2e, rearrange %.2e",
                  worst_boot, worst_ll, worst_rearr);
    report("criterion 7: optimized pipeline equals naive reference on 50 small instances", ok,
           buf);
}

// --- criterion 8: structural invariant sweep ----------------------------

void criterion_8() {
    bool ok = true;
    std::string note;

    // kernel identities
    const double mass =
        oracles::simpson([](double x) { return oracles::jackknife_kernel(x); }, -1.0, 1.0);
    const double second = oracles::simpson(
        [](double x) { return x * x * oracles::jackknife_kernel(x); }, -1.0, 1.0);
    if (std::fabs(mass - 1.0) > 1e-10 || std::fabs(second) > 1e-10) {
        ok = false;
        note += "kernel identities; ";
    }
    for (double u : {-0.7, 0.0, 0.5})
        if (std::fabs(kernels::kstar_jackknife({}, u, 0.5, 0.2) -
                      kernels::jackknife_kernel({}, u)) > 1e-14) {
            ok = false;
            note += "interior K*; ";
            break;
        }

    // band structure on a simulated panel
    simgen::DgpSpec spec;
    spec.model = simgen::Model::TrendA;
    spec.n = 300;
    spec.p = 9;
    spec.seed = 801;
    const TimeSeriesPanel panel = simgen::make_trend_panel(spec);
    BandwidthConfig cfg;
    tuning::resolve_trend_config(panel, cfg);
    cfg.B = 400;
    cfg.seed = 802;
    cfg.threads = 1;
    const ScbResult one = bootstrap::run_scb_trend(panel, cfg);
    cfg.threads = 3;
    const ScbResult three = bootstrap::run_scb_trend(panel, cfg);
    for (int i = 0; i < one.B; ++i)
        if (one.sup_samples[i] != three.sup_samples[i]) {
            ok = false;
            note += "thread determinism; ";
            break;
        }
    for (int k = 0; k < one.K && ok; ++k)
        for (int g = 1; g < one.G; ++g)
            if (one.estimate_at(g, k) < one.estimate_at(g - 1, k) - 1e-12) {
                ok = false;
                note += "monotone estimate; ";
                break;
            }
    if (!(one.q_hat.at(0.05) >= one.q_hat.at(0.10))) {
        ok = false;
        note += "quantile monotonicity; ";
    }
    for (double a : cfg.alpha)
        for (int k = 0; k < one.K && ok; ++k)
            for (int g = 0; g < one.G; ++g)
                if (std::fabs(one.upper(g, k, a) - one.lower(g, k, a) - 2.0 * one.q_hat.at(a)) >
                    1e-12) {
                    ok = false;
                    note += "constant width; ";
                    break;
                }

    // rank-one PSD increments: reconstruction and Loewner monotonicity
    const auto mt = smoother::fit_at_observations(panel, cfg.hr);
    const auto res = smoother::residuals_trend(panel, mt);
    const auto inc = lrcov::cum_increments(res, panel.n, panel.p, cfg.L);
    for (int k = cfg.L; k <= panel.n && ok; k += 37) {
        const auto prev = lrcov::cumulative_q(inc, k - 1);
        const auto cur = lrcov::cumulative_q(inc, k);
        linalg::Mat diff(panel.p, panel.p);
        for (std::size_t i = 0; i < diff.a.size(); ++i) diff.a[i] = cur.a[i] - prev.a[i];
        std::vector<double> w;
        linalg::Mat v;
        linalg::sym_eigen(diff, w, v);
        for (double ev : w)
            if (ev < -1e-12) {
                ok = false;
                note += "increment PSD; ";
                break;
            }
    }

    report("criterion 8: structural invariant suite", ok, ok ? "all invariants hold" : note);
}

}  // namespace

int main(int argc, char** argv) {
    const bool smoke = argc > 1 && std::strcmp(argv[1], "--smoke") == 0;
    std::printf("acceptance suite (%s protocol)\n", smoke ? "smoke" : "full");

    criterion_1_and_3(smoke);
    criterion_2(smoke);
    criterion_4(smoke);
    criterion_5(smoke);
    criterion_6(smoke);
    criterion_7();
    criterion_8();

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
