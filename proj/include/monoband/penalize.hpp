#pragma once

#include <vector>

#include "monoband/types.hpp"

namespace monoband::penalize {

// Cubic penalization lambda(t) = c1 t + c2 t^2 + c3 t^3 added to the data to
// restore strict monotonicity on weakly monotone trends.
struct PenaltyConfig {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double g_n1 = 0.0;  // correction-rate constant; 0 keeps the exact shift

    static PenaltyConfig from_c1(double c1);  // c2 = c3 = c1^{19/8}
};

double penalty_lambda(const PenaltyConfig& cfg, double t);

// Fills any unset tuning fields for a penalized fit. Selection runs on the
// shifted pseudo data; an auto-selected hd is rescaled by the raw/pseudo
// value-range ratio so the rearrangement keeps the same relative resolution
// after the shift dilates the fitted range.
void resolve_penalized_config(const TimeSeriesPanel& panel, const PenaltyConfig& penalty,
                              BandwidthConfig& cfg);

struct PenalizedScb {
    ScbResult scb;          // corrected estimate with bands shifted alike
    PenaltyConfig penalty;
    bool monotone = false;  // min consecutive grid difference >= -1e-10
};

// Fits the SCB on the shifted pseudo data and subtracts
// lambda(t) - c3 g_n1 t from the estimate (bands move with it).
PenalizedScb penalized_scb(const TimeSeriesPanel& panel, const BandwidthConfig& config,
                           const PenaltyConfig& penalty);

// Walks the decrement ladder from the largest factor down and keeps the first
// penalty whose corrected estimate is monotone. When none passes, the
// smallest is returned with `monotone_found == false`.
struct C1Selection {
    PenaltyConfig penalty;
    double factor = 1.0;
    bool monotone_found = false;
    PenalizedScb fit;
};
C1Selection select_c1(const TimeSeriesPanel& panel, const BandwidthConfig& config,
                      double c1_0, const std::vector<double>& ladder = {});

bool is_monotone_fit(const ScbResult& scb, double tol = 1e-10);

}  // namespace monoband::penalize
