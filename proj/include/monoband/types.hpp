#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "monoband/errors.hpp"

namespace monoband {

// Column-major panel of observations on the rescaled grid t_i = i/n, i = 1..n.
// Column k holds series k. In regression mode `x` carries the covariate
// columns (the first one is usually the constant intercept).
struct TimeSeriesPanel {
    int n = 0;
    int p = 0;
    std::vector<double> y;  // n*p, column-major: y[k*n + i]
    std::vector<double> x;  // empty in trend mode, else n*px column-major
    int px = 0;

    double time(int i) const { return static_cast<double>(i + 1) / n; }  // i is 0-based
    const double* col(int k) const { return y.data() + static_cast<std::size_t>(k) * n; }
    double* col(int k) { return y.data() + static_cast<std::size_t>(k) * n; }
    const double* xcol(int k) const { return x.data() + static_cast<std::size_t>(k) * n; }

    void validate() const;
};

inline void TimeSeriesPanel::validate() const {
    if (n < 10 || p < 1) throw TooShort("panel needs n >= 10 and p >= 1");
    if (y.size() != static_cast<std::size_t>(n) * p)
        throw InvalidConfig("panel storage does not match n*p");
    for (double v : y)
        if (!std::isfinite(v)) throw InvalidConfig("panel contains non-finite values");
    if (!x.empty()) {
        if (px < 1 || x.size() != static_cast<std::size_t>(n) * px)
            throw InvalidConfig("covariate storage does not match n*px");
        for (double v : x)
            if (!std::isfinite(v)) throw InvalidConfig("covariates contain non-finite values");
    }
}

// Tuning configuration shared by the fit/bootstrap pipeline. Per-coordinate
// bandwidths are supported; a single entry means "shared".
struct BandwidthConfig {
    std::vector<double> hr;    // regression bandwidth(s), one or p entries
    std::vector<double> hd;    // rearrangement bandwidth(s)
    int N = 4000;              // rearrangement grid size
    int L = 0;                 // block length (0 = select by minimum volatility)
    int B = 2000;              // bootstrap sample size
    std::vector<double> alpha = {0.10, 0.05};
    int G = 0;                 // evaluation grid size (0 = min(400, n))
    std::uint64_t seed = 0;
    double ridge = 0.0;        // optional ridge added to M-hat before inversion
    int threads = 1;

    double hr_at(int k) const { return hr.size() == 1 ? hr[0] : hr.at(k); }
    double hd_at(int k) const { return hd.size() == 1 ? hd[0] : hd.at(k); }
    void validate(int n, int p) const;
};

inline void BandwidthConfig::validate(int n, int p) const {
    if (hr.empty() || hd.empty())
        throw InvalidConfig("bandwidths not resolved; run tuning first or pass --hr/--hd");
    if ((hr.size() != 1 && static_cast<int>(hr.size()) != p) ||
        (hd.size() != 1 && static_cast<int>(hd.size()) != p))
        throw InvalidConfig("bandwidth lists must have one entry or p entries");
    for (int k = 0; k < p; ++k) {
        const double r = hr_at(k), d = hd_at(k);
        if (!(r > 0.0 && r < 0.5)) throw InvalidConfig("hr must lie in (0, 0.5)");
        if (!(d > 0.0 && d <= 0.45)) throw InvalidConfig("hd must lie in (0, 0.45]");
        if (N * d < 10.0) throw InvalidConfig("N*hd must be at least 10");
    }
    if (L < 2 || L > n / 2) throw InvalidWindow("block length must satisfy 2 <= L <= n/2");
    if (B < 1) throw InvalidConfig("bootstrap size must be positive");
    if (alpha.empty()) throw InvalidConfig("at least one alpha level required");
    for (double a : alpha)
        if (!(a > 0.0 && a < 1.0)) throw InvalidConfig("alpha levels must lie in (0,1)");
    if (G < 0) throw InvalidConfig("evaluation grid size must be nonnegative");
    if (threads < 1) throw InvalidConfig("thread count must be positive");
}

// Jackknife smooth on the i/N grid plus the plain fit kept for diagnostics.
struct SmootherFit {
    int N = 0;
    int p = 0;
    std::vector<double> grid;    // N points i/N, i = 1..N
    std::vector<double> mtilde;  // N*p column-major jackknife estimate
    std::vector<double> mhat;    // N*p plain local-linear estimate at h_r
    std::vector<double> hr;      // bandwidth(s) actually used

    const double* mtilde_col(int k) const { return mtilde.data() + static_cast<std::size_t>(k) * N; }
    const double* mhat_col(int k) const { return mhat.data() + static_cast<std::size_t>(k) * N; }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double t) const { return t >= lo && t <= hi; }
};

// Monotone rearranged estimate on an evaluation grid inside the common domain.
struct MonotoneFit {
    int G = 0;
    int K = 0;                    // coordinates (p in trend mode, s in contrast mode)
    Interval domain;              // common domain T-hat
    std::vector<double> eval_grid;  // G times inside domain
    std::vector<double> m_I;        // G*K column-major monotone estimates

    const double* col(int k) const { return m_I.data() + static_cast<std::size_t>(k) * G; }
    double* col(int k) { return m_I.data() + static_cast<std::size_t>(k) * G; }
};

// Rank-1 factored increments of the cumulative long-run covariance. In trend
// mode factor j is the residual block sum Delta_j; in regression mode it is
// u_j = C M^{-1}(t_j) w_j. Either way the implied increment is
// factor_j factor_j^T / L and factors with j < L are exactly zero.
struct LongRunIncrements {
    enum class Mode { Trend, Regression };
    Mode mode = Mode::Trend;
    int n = 0;
    int dim = 0;  // p (trend) or s (regression)
    int L = 0;
    std::vector<double> factors;  // n*dim, column-major: factors[k*n + j]

    const double* factor_col(int k) const { return factors.data() + static_cast<std::size_t>(k) * n; }
    double* factor_col(int k) { return factors.data() + static_cast<std::size_t>(k) * n; }
};

// Joint simultaneous confidence band result.
struct ScbResult {
    int n = 0;
    int K = 0;
    int G = 0;
    int B = 0;
    std::vector<double> alpha;
    std::vector<double> sup_samples;        // B values, ordered by replicate index
    std::map<double, double> q_hat;         // alpha -> quantile
    Interval domain;
    std::vector<double> eval_grid;          // G
    std::vector<double> estimate;           // G*K column-major
    std::uint64_t seed = 0;
    BandwidthConfig config;

    double lower(int g, int k, double a) const {
        return estimate[static_cast<std::size_t>(k) * G + g] - q_hat.at(a);
    }
    double upper(int g, int k, double a) const {
        return estimate[static_cast<std::size_t>(k) * G + g] + q_hat.at(a);
    }
    double estimate_at(int g, int k) const {
        return estimate[static_cast<std::size_t>(k) * G + g];
    }
};

}  // namespace monoband
