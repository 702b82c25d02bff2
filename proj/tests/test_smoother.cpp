#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "monoband/errors.hpp"
#include "monoband/rng.hpp"
#include "monoband/smoother.hpp"
#include "oracles.hpp"

using namespace monoband;

namespace {
std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
    return v;
}
}  // namespace

TEST_CASE("constants and lines are reproduced exactly") {
    const int n = 120;
    std::vector<double> c(n, 3.25), line(n);
    for (int i = 0; i < n; ++i) line[i] = -1.0 + 2.5 * static_cast<double>(i + 1) / n;
    const auto eval = linspace(0.05, 0.95, 19);

    const auto fc = smoother::ll_trend(c.data(), n, 0.2, eval);
    const auto fl = smoother::ll_trend(line.data(), n, 0.2, eval);
    for (std::size_t e = 0; e < eval.size(); ++e) {
        CHECK(fc.level[e] == doctest::Approx(3.25).epsilon(1e-12));
        CHECK(std::fabs(fc.deriv[e]) < 1e-9);
        CHECK(fl.level[e] == doctest::Approx(-1.0 + 2.5 * eval[e]).epsilon(1e-10));
        CHECK(fl.deriv[e] == doctest::Approx(2.5).epsilon(1e-8));
    }
    const auto jc = smoother::jackknife_trend(line.data(), n, 0.2, eval);
    for (std::size_t e = 0; e < eval.size(); ++e)
        CHECK(jc[e] == doctest::Approx(-1.0 + 2.5 * eval[e]).epsilon(1e-10));
}

TEST_CASE("noisy fit matches the dense weighted least squares oracle") {
    RandomStream s(5, 0);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 60 + static_cast<int>(s.uniform() * 140);
        const double h = 0.15 + 0.2 * s.uniform();
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = std::sin(3.0 * (i + 1.0) / n) + 0.3 * s.normal();
        const double t = 0.05 + 0.9 * s.uniform();
        const auto fit = smoother::ll_trend(y.data(), n, h, {t});
        double lvl, der;
        oracles::dense_local_linear(y.data(), n, h, t, &lvl, &der);
        CHECK(fit.level[0] == doctest::Approx(lvl).epsilon(1e-10));
        CHECK(fit.deriv[0] == doctest::Approx(der).epsilon(1e-10));
    }
}

TEST_CASE("jackknife cancels the quadratic bias") {
    const int n = 1000;
    const double h = 0.2;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / n;
        y[i] = t * t;
    }
    const auto eval = linspace(0.25, 0.75, 101);
    const auto plain = smoother::ll_trend(y.data(), n, h, eval);
    const auto jack = smoother::jackknife_trend(y.data(), n, h, eval);
    double worst_plain = 0.0, worst_jack = 0.0;
    for (std::size_t e = 0; e < eval.size(); ++e) {
        worst_plain = std::max(worst_plain, std::fabs(plain.level[e] - eval[e] * eval[e]));
        worst_jack = std::max(worst_jack, std::fabs(jack[e] - eval[e] * eval[e]));
    }
    CHECK(worst_jack < 0.2 * worst_plain);
}

TEST_CASE("locality: a point change only moves nearby fits") {
    const int n = 200;
    const double h = 0.1;
    RandomStream s(6, 0);
    std::vector<double> y(n);
    for (double& v : y) v = s.normal();
    const auto eval = linspace(0.02, 0.98, 97);
    const auto base = smoother::ll_trend(y.data(), n, h, eval);
    const int j = 100;  // t_j = 0.5
    std::vector<double> bumped = y;
    bumped[j - 1] += 10.0;
    const auto moved = smoother::ll_trend(bumped.data(), n, h, eval);
    for (std::size_t e = 0; e < eval.size(); ++e) {
        const double dist = std::fabs(eval[e] - static_cast<double>(j) / n);
        if (dist > h + 1e-9)
            CHECK(moved.level[e] == doctest::Approx(base.level[e]).epsilon(1e-12));
    }
}

TEST_CASE("regression reduces to trend for an intercept-only design") {
    const int n = 150;
    RandomStream s(7, 0);
    std::vector<double> y(n), ones(n, 1.0);
    for (double& v : y) v = 2.0 + s.normal();
    const auto eval = linspace(0.1, 0.9, 9);
    const auto reg = smoother::ll_regression(y.data(), ones.data(), n, 1, 0.25, eval);
    const auto trend = smoother::ll_trend(y.data(), n, 0.25, eval);
    for (std::size_t e = 0; e < eval.size(); ++e)
        CHECK(reg.level[e] == doctest::Approx(trend.level[e]).epsilon(1e-10));
}

TEST_CASE("constant coefficients are recovered exactly and match the dense oracle") {
    RandomStream s(8, 0);
    const int n = 500, p = 2;
    std::vector<double> x(static_cast<std::size_t>(n) * p);
    for (int i = 0; i < n; ++i) {
        x[i] = 1.0;
        x[n + i] = s.normal();
    }
    std::vector<double> clean(n);
    for (int i = 0; i < n; ++i) clean[i] = 1.5 * x[i] - 0.7 * x[n + i];
    const auto eval = linspace(0.3, 0.7, 5);
    const auto f = smoother::ll_regression(clean.data(), x.data(), n, p, 0.2, eval);
    for (std::size_t e = 0; e < eval.size(); ++e) {
        CHECK(f.level[e] == doctest::Approx(1.5).epsilon(1e-9));
        CHECK(f.level[eval.size() + e] == doctest::Approx(-0.7).epsilon(1e-9));
    }

    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = clean[i] + 0.5 * s.normal();
    const auto noisy = smoother::ll_regression(y.data(), x.data(), n, p, 0.2, {0.5});
    const auto oracle = oracles::dense_regression(y.data(), x.data(), n, p, 0.2, 0.5);
    CHECK(noisy.level[0] == doctest::Approx(oracle[0]).epsilon(1e-10));
    CHECK(noisy.level[1] == doctest::Approx(oracle[1]).epsilon(1e-10));
    CHECK(noisy.deriv[0] == doctest::Approx(oracle[2]).epsilon(1e-8));
    CHECK(noisy.deriv[1] == doctest::Approx(oracle[3]).epsilon(1e-8));
}

TEST_CASE("residuals vanish on noiseless inputs and feed-backs") {
    const int n = 200;
    TimeSeriesPanel panel;
    panel.n = n;
    panel.p = 1;
    panel.y.resize(n);
    for (int i = 0; i < n; ++i) panel.y[i] = 0.5 + 2.0 * static_cast<double>(i + 1) / n;
    const auto mt = smoother::fit_at_observations(panel, {0.2});
    const auto res = smoother::residuals_trend(panel, mt);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / n;
        if (t > 0.2 && t < 0.8) CHECK(std::fabs(res[i]) < 1e-10);
    }
    const auto zero = smoother::residuals_trend(panel, panel.y);
    for (double r : zero) CHECK(r == 0.0);
}

TEST_CASE("residual variance tracks the error process") {
    // model-(a)-style AR noise around a known trend; the residual sample
    // variance should come out near the error variance
    RandomStream s(9, 0);
    const int n = 2000;
    TimeSeriesPanel panel;
    panel.n = n;
    panel.p = 1;
    panel.y.resize(n);
    double state = 0.0;
    double errvar = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / n;
        const double b = 0.15 * (0.9 + 0.1 * std::sin(2.0 * 3.14159265358979 * t));
        state = b * state + s.normal();
        errvar += state * state;
        panel.y[i] = std::exp(t) + state;
    }
    errvar /= n;
    const auto mt = smoother::fit_at_observations(panel, {0.2});
    const auto res = smoother::residuals_trend(panel, mt);
    double rvar = 0.0;
    for (double r : res) rvar += r * r;
    rvar /= n;
    CHECK(rvar == doctest::Approx(errvar).epsilon(0.15));
}

TEST_CASE("degenerate bandwidths are refused") {
    std::vector<double> y(50, 1.0);
    CHECK_THROWS_AS(smoother::ll_trend(y.data(), 50, 0.1, {0.5}), SingularDesign);  // n*h = 5
    CHECK_THROWS_AS(smoother::ll_trend(y.data(), 50, 0.6, {0.5}), InvalidConfig);
}
