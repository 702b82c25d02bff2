#include "monoband/penalize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "monoband/bootstrap.hpp"
#include "monoband/errors.hpp"
#include "monoband/smoother.hpp"
#include "monoband/tuning.hpp"

namespace monoband::penalize {

PenaltyConfig PenaltyConfig::from_c1(double c1) {
    if (!(c1 >= 0.0)) throw InvalidConfig("c1 must be nonnegative");
    PenaltyConfig cfg;
    cfg.c1 = c1;
    cfg.c2 = cfg.c3 = std::pow(c1, 19.0 / 8.0);
    return cfg;
}

double penalty_lambda(const PenaltyConfig& cfg, double t) {
    return t * (cfg.c1 + t * (cfg.c2 + t * cfg.c3));
}

bool is_monotone_fit(const ScbResult& scb, double tol) {
    for (int k = 0; k < scb.K; ++k)
        for (int g = 1; g < scb.G; ++g)
            if (scb.estimate_at(g, k) - scb.estimate_at(g - 1, k) < -tol) return false;
    return true;
}

PenalizedScb penalized_scb(const TimeSeriesPanel& panel, const BandwidthConfig& config,
                           const PenaltyConfig& penalty) {
    TimeSeriesPanel shifted = panel;
    for (int k = 0; k < panel.p; ++k) {
        double* col = shifted.col(k);
        for (int i = 0; i < panel.n; ++i) col[i] += penalty_lambda(penalty, panel.time(i));
    }
    PenalizedScb out;
    out.penalty = penalty;
    out.scb = bootstrap::run_scb_trend(shifted, config);
    // undo the shift, keeping the residual linear term that preserves monotonicity
    for (int g = 0; g < out.scb.G; ++g) {
        const double t = out.scb.eval_grid[g];
        const double shift = penalty_lambda(penalty, t) - penalty.c3 * penalty.g_n1 * t;
        for (int k = 0; k < out.scb.K; ++k)
            out.scb.estimate[static_cast<std::size_t>(k) * out.scb.G + g] -= shift;
    }
    out.monotone = is_monotone_fit(out.scb);
    return out;
}

C1Selection select_c1(const TimeSeriesPanel& panel, const BandwidthConfig& config,
                      double c1_0, const std::vector<double>& ladder) {
    if (!(c1_0 > 0.0)) throw InvalidConfig("c1_0 must be positive");
    std::vector<double> steps = ladder;
    if (steps.empty())
        steps = {1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};

    C1Selection sel;
    for (double a : steps) {
        const PenaltyConfig cfg = PenaltyConfig::from_c1(a * c1_0);
        PenalizedScb fit = penalized_scb(panel, config, cfg);
        const bool ok = fit.monotone;
        sel.penalty = cfg;
        sel.factor = a;
        sel.fit = std::move(fit);
        if (ok) {
            sel.monotone_found = true;
            return sel;
        }
    }
    sel.monotone_found = false;  // smallest ladder entry, with a warning flag
    return sel;
}

}  // namespace monoband::penalize
