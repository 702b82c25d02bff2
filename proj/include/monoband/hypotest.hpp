#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "monoband/types.hpp"

namespace monoband::hypotest {

struct TestOutcome {
    bool reject = false;
    double level = 0.0;                      // alpha used
    std::optional<double> p_value;
    std::optional<int> witness_coordinate;
    std::optional<double> witness_time;      // second time of the binding pair
};

// Whether the curve stays inside [lower, upper] at every grid point and
// coordinate (boundary inclusive), plus the largest signed excursion beyond
// the band (negative when strictly inside).
struct Containment {
    bool contained = true;
    double worst_excursion = 0.0;  // max over points of |curve-estimate| - q
    int worst_coordinate = 0;
    double worst_time = 0.0;
};
Containment band_contains(const ScbResult& scb, double alpha,
                          const std::vector<double>& curve /* G*K column-major */);

// Least squares fit of a t^2 + b t + c with a, b >= 0 by enumerating the four
// active-set patterns.
struct QuadraticFit {
    double a = 0.0, b = 0.0, c = 0.0;
    double sse = 0.0;
};
QuadraticFit constrained_quadratic_fit(const double* y, int n);

// Joint quadratic-trend test: per-coordinate constrained fits, one joint
// containment check, rejection when any fitted curve leaves the band.
TestOutcome test_quadratic_trend(const ScbResult& scb, const TimeSeriesPanel& panel,
                                 double alpha);

// Rejects when some coordinate shows an increase above C between t0 and t1
// after removing twice the band radius.
TestOutcome test_increase_span(const ScbResult& scb, double t0, double t1, double c,
                               double alpha);

// Same criterion over every grid pair with spacing at most delta.
TestOutcome test_increase_window(const ScbResult& scb, double delta, double c, double alpha);
// O(G^2) reference scan of the same statistic, for verification.
double increase_window_stat_full(const ScbResult& scb, double delta);
double increase_window_stat(const ScbResult& scb, double delta);

// p-value of a band criterion that rejects exactly when q_hat < threshold:
// 1 minus the highest confidence level at which the rejection holds, resolved
// on the stored bootstrap sample (floored at 1/B).
double pvalue_from_threshold(const ScbResult& scb, double threshold);

// VIC model-selection score log(SSE) + n^{-2/5} |D| for a covariate subset.
double vic_score(const double* y, const double* x, int n, int p,
                 const std::vector<int>& subset, double hr);

}  // namespace monoband::hypotest
