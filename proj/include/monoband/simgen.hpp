#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monoband/linalg.hpp"
#include "monoband/penalize.hpp"
#include "monoband/types.hpp"

namespace monoband::simgen {

enum class Model {
    TrendA,         // locally stationary AR with b(t) = 0.15(0.9 + 0.1 sin(2 pi t))
    TrendB,         // piecewise stationary AR(+-0.5) switching at t = 1/3
    RegC,           // regression with locally stationary MA errors
    RegD,           // regression with piecewise AR errors
    SkewExp,        // model (a) driven by standardized exponential innovations
    SkewLogNormal,  // model (a) driven by standardized log-normal innovations
    WeakMonotone    // weakly monotone trends with model (a) errors
};

struct DgpSpec {
    Model model = Model::TrendA;
    int n = 500;
    int p = 9;
    int burn_in = 200;
    std::uint64_t seed = 0;
    // test overrides: scale factors on the dependence coefficients
    double ar_scale = 1.0;
    double ma_scale = 1.0;
};

enum class TrendVariant { Strict, Weak };

// The three stacked trend blocks scaled by a_i = 1 + 0.2 (i/p)^{1/2}.
struct TrendFamily {
    int p = 0;
    TrendVariant variant = TrendVariant::Strict;
    void eval(double t, double* out) const;  // p values
    double eval_coord(double t, int k) const;
};
TrendFamily make_trends(int p, TrendVariant variant);

// Block-diagonal innovation covariance: leading floor(p/2) block filled with
// (-0.95)^{|j-l|}, identity elsewhere.
linalg::Mat make_sigma_e(int p);

// Error panel of the trend-mode models (n x p, column-major).
std::vector<double> make_errors(const DgpSpec& spec);

// Trend-mode observation panel: trends plus errors.
TimeSeriesPanel make_trend_panel(const DgpSpec& spec);

// Regression models (c)/(d): covariates (1, x_i) and the response.
struct RegressionData {
    int n = 0;
    std::vector<double> y;
    std::vector<double> x;  // n x 2 column-major, first column all ones
};
RegressionData make_regression(const DgpSpec& spec);

struct StudySpec {
    DgpSpec dgp;
    BandwidthConfig config;  // unset bandwidths are tuned per run
    int runs = 400;
    std::optional<penalize::PenaltyConfig> penalty;
    int threads = 1;
};

struct StudyResult {
    int runs_done = 0;
    int failures = 0;
    std::vector<double> alpha;
    std::map<double, double> coverage;
    std::map<double, double> coverage_se;   // binomial standard error
    std::map<double, double> mean_width;    // mean band width per level
    std::map<double, double> mean_q;        // mean bootstrap quantile
    std::vector<std::string> failure_messages;
};

// Monte Carlo coverage/width study: per run simulate, tune, fit, band, and
// check whether the true curves stay inside the joint band at every grid
// point. Runs execute in parallel on per-run random streams.
StudyResult coverage_study(const StudySpec& spec);

const char* model_name(Model m);
Model model_from_name(const std::string& name);

}  // namespace monoband::simgen
