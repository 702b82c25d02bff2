#include "monoband/simgen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "monoband/bootstrap.hpp"
#include "monoband/errors.hpp"
#include "monoband/rng.hpp"
#include "monoband/tuning.hpp"

namespace monoband::simgen {

namespace {
constexpr double kPi = 3.14159265358979323846;

double strict_block(int block, double t) {
    switch (block) {
        case 0: return 0.5 * t * t + t;
        case 1: return std::exp(t);
        default: return 2.0 * std::log(t + 1.0);
    }
}

double weak_block(int block, double t) {
    switch (block) {
        case 0:
            if (t < 1.0 / 3.0) return 2.0 * std::exp(1.0 / 3.0);
            return (t * t - 8.0 * t / 3.0 + 25.0 / 9.0) * std::exp(t);
        case 1: {
            if (t < 1.0 / 3.0) {
                const double u = 3.0 * (t - 1.0 / 3.0);
                return 1.0 + u * u * u;
            }
            if (t < 2.0 / 3.0) return 1.0;
            const double u = 3.0 * (t - 2.0 / 3.0);
            return 1.0 + u * u * u;
        }
        default:
            if (t < 2.0 / 3.0) return 2.0 * std::cos(3.0 * kPi * (t - 2.0 / 3.0) / 4.0);
            return 2.0;
    }
}
}  // namespace

double TrendFamily::eval_coord(double t, int k) const {
    const double a = 1.0 + 0.2 * std::sqrt(static_cast<double>(k + 1) / p);
    const int third = p / 3;
    const int block = k < third ? 0 : (k < 2 * third ? 1 : 2);
    const double base = variant == TrendVariant::Strict ? strict_block(block, t)
                                                        : weak_block(block, t);
    return a * base;
}

void TrendFamily::eval(double t, double* out) const {
    for (int k = 0; k < p; ++k) out[k] = eval_coord(t, k);
}

TrendFamily make_trends(int p, TrendVariant variant) {
    if (p < 3) throw InvalidConfig("trend family needs p >= 3");
    return TrendFamily{p, variant};
}

linalg::Mat make_sigma_e(int p) {
    if (p < 2) throw InvalidConfig("sigma_e needs p >= 2");
    linalg::Mat sigma(p, p);
    const int block = p / 2;
    for (int j = 0; j < p; ++j) sigma(j, j) = 1.0;
    for (int j = 0; j < block; ++j)
        for (int l = 0; l < block; ++l)
            if (j != l) sigma(j, l) = std::pow(-0.95, std::abs(j - l));
    return sigma;
}

namespace {

bool is_trend_model(Model m) {
    return m == Model::TrendA || m == Model::TrendB || m == Model::SkewExp ||
           m == Model::SkewLogNormal || m == Model::WeakMonotone;
}

// Innovation vector xi = factor * eta with iid standardized entries of eta.
void draw_innovation(RandomStream& stream, const linalg::Mat& factor, Model model,
                     std::vector<double>& eta, std::vector<double>& xi) {
    const int p = factor.rows;
    for (int k = 0; k < p; ++k) {
        switch (model) {
            case Model::SkewExp: eta[k] = stream.std_exponential(); break;
            case Model::SkewLogNormal: eta[k] = stream.std_lognormal(); break;
            default: eta[k] = stream.normal(); break;
        }
    }
    for (int r = 0; r < p; ++r) {
        double acc = 0.0;
        for (int c = 0; c < p; ++c) acc += factor(r, c) * eta[c];
        xi[r] = acc;
    }
}

}  // namespace

std::vector<double> make_errors(const DgpSpec& spec) {
    if (!is_trend_model(spec.model)) throw InvalidConfig("make_errors needs a trend model");
    if (spec.burn_in < 100) throw InvalidConfig("burn-in must be at least 100");
    const int n = spec.n;
    const int p = spec.p;
    const linalg::Mat sigma = make_sigma_e(p);
    const bool skew = spec.model == Model::SkewExp || spec.model == Model::SkewLogNormal;
    const linalg::Mat factor = skew ? linalg::sym_sqrt_psd(sigma) : linalg::cholesky(sigma);

    RandomStream stream(spec.seed, stream_id::compose(stream_id::kData, 0));
    std::vector<double> eta(p), xi(p);
    std::vector<double> errors(static_cast<std::size_t>(n) * p);

    const bool piecewise = spec.model == Model::TrendB;
    auto b_of = [&](double t) {
        return spec.ar_scale * 0.15 * (0.9 + 0.1 * std::sin(2.0 * kPi * t));
    };

    if (!piecewise) {
        std::vector<double> state(p, 0.0);
        for (int s = 0; s < spec.burn_in; ++s) {
            draw_innovation(stream, factor, spec.model, eta, xi);
            const double b = b_of(0.0);
            for (int k = 0; k < p; ++k) state[k] = b * state[k] + xi[k];
        }
        for (int i = 0; i < n; ++i) {
            draw_innovation(stream, factor, spec.model, eta, xi);
            const double b = b_of(static_cast<double>(i + 1) / n);
            for (int k = 0; k < p; ++k) {
                state[k] = b * state[k] + xi[k];
                errors[static_cast<std::size_t>(k) * n + i] = state[k];
            }
        }
    } else {
        // two stationary chains driven by shared innovations; switch at t = 1/3
        std::vector<double> pos(p, 0.0), neg(p, 0.0);
        const double a = 0.5 * spec.ar_scale;
        for (int s = 0; s < spec.burn_in; ++s) {
            draw_innovation(stream, factor, spec.model, eta, xi);
            for (int k = 0; k < p; ++k) {
                pos[k] = a * pos[k] + xi[k];
                neg[k] = -a * neg[k] + xi[k];
            }
        }
        for (int i = 0; i < n; ++i) {
            draw_innovation(stream, factor, spec.model, eta, xi);
            const bool first_regime = 3 * (i + 1) <= n;
            for (int k = 0; k < p; ++k) {
                pos[k] = a * pos[k] + xi[k];
                neg[k] = -a * neg[k] + xi[k];
                errors[static_cast<std::size_t>(k) * n + i] = first_regime ? pos[k] : neg[k];
            }
        }
    }
    return errors;
}

TimeSeriesPanel make_trend_panel(const DgpSpec& spec) {
    const TrendFamily trends = make_trends(
        spec.p, spec.model == Model::WeakMonotone ? TrendVariant::Weak : TrendVariant::Strict);
    TimeSeriesPanel panel;
    panel.n = spec.n;
    panel.p = spec.p;
    panel.y = make_errors(spec);
    for (int k = 0; k < spec.p; ++k) {
        double* col = panel.col(k);
        for (int i = 0; i < spec.n; ++i)
            col[i] += trends.eval_coord(static_cast<double>(i + 1) / spec.n, k);
    }
    return panel;
}

namespace {

// number of MA terms until the geometric weight drops below 1e-12
int ma_terms(double coef) {
    const double c = std::fabs(coef);
    if (c < 1e-12) return 1;
    return static_cast<int>(std::ceil(std::log(1e-12) / std::log(c)));
}

}  // namespace

RegressionData make_regression(const DgpSpec& spec) {
    if (spec.model != Model::RegC && spec.model != Model::RegD)
        throw InvalidConfig("make_regression needs model (c) or (d)");
    const int n = spec.n;
    RegressionData data;
    data.n = n;
    data.x.assign(static_cast<std::size_t>(n) * 2, 0.0);
    data.y.assign(n, 0.0);
    RandomStream stream(spec.seed, stream_id::compose(stream_id::kData, 0));

    auto c_of = [&](double t) { return spec.ma_scale * (0.25 + 0.5 * t); };
    const int jx = ma_terms(c_of(1.0));
    std::vector<double> eps(static_cast<std::size_t>(n) + jx);
    for (double& e : eps) e = stream.normal();

    // covariate: frozen-coefficient MA sum truncated at 1e-12 weights
    for (int i = 0; i < n; ++i) {
        const double c = c_of(static_cast<double>(i + 1) / n);
        const int terms = std::min(ma_terms(c), jx + i + 1);
        double acc = 0.0;
        double w = 1.0;
        for (int j = 0; j < terms; ++j) {
            acc += w * eps[static_cast<std::size_t>(i + jx - j)];
            w *= c;
        }
        data.x[static_cast<std::size_t>(n) + i] = acc;
    }
    for (int i = 0; i < n; ++i) data.x[i] = 1.0;

    std::vector<double> errors(n, 0.0);
    if (spec.model == Model::RegC) {
        auto a_of = [&](double t) { return spec.ar_scale * (0.5 - (t - 0.5) * (t - 0.5)); };
        const int je = ma_terms(a_of(0.5));
        std::vector<double> xi(static_cast<std::size_t>(n) + je);
        for (double& v : xi) v = stream.normal();
        for (int i = 0; i < n; ++i) {
            const double a = a_of(static_cast<double>(i + 1) / n);
            const int terms = std::min(ma_terms(a), je + i + 1);
            double acc = 0.0;
            double w = 1.0;
            for (int j = 0; j < terms; ++j) {
                acc += w * xi[static_cast<std::size_t>(i + je - j)];
                w *= a;
            }
            errors[i] = acc;
        }
    } else {
        const double a = 0.5 * spec.ar_scale;
        double pos = 0.0, neg = 0.0;
        for (int s = 0; s < spec.burn_in; ++s) {
            const double xi = stream.normal();
            pos = a * pos + xi;
            neg = -a * neg + xi;
        }
        for (int i = 0; i < n; ++i) {
            const double xi = stream.normal();
            pos = a * pos + xi;
            neg = -a * neg + xi;
            errors[i] = 3 * (i + 1) <= n ? pos : neg;
        }
    }

    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / n;
        data.y[i] = strict_block(0, t) + strict_block(1, t) * data.x[static_cast<std::size_t>(n) + i] +
                    errors[i];
    }
    return data;
}

namespace {

struct RunOutcome {
    bool ok = false;
    std::string error;
    double maxdev = 0.0;
    std::vector<double> q;  // aligned with alpha
};

RunOutcome run_once(const StudySpec& spec, int run) {
    RunOutcome out;
    try {
        DgpSpec dgp = spec.dgp;
        dgp.seed = rng::mix(spec.dgp.seed, stream_id::compose(stream_id::kStudyRun, 1),
                            static_cast<std::uint64_t>(run));
        BandwidthConfig cfg = spec.config;
        cfg.seed = rng::mix(spec.dgp.seed ^ spec.config.seed,
                            stream_id::compose(stream_id::kStudyRun, 2),
                            static_cast<std::uint64_t>(run));
        cfg.threads = 1;

        ScbResult scb;
        double maxdev = 0.0;
        if (spec.dgp.model == Model::RegC || spec.dgp.model == Model::RegD) {
            const RegressionData data = make_regression(dgp);
            tuning::resolve_regression_config(data.y.data(), data.x.data(), data.n, 2, cfg);
            scb = bootstrap::run_scb_regression(data.y.data(), data.x.data(), data.n, 2,
                                                linalg::identity(2), cfg);
            for (int g = 0; g < scb.G; ++g) {
                const double t = scb.eval_grid[g];
                maxdev = std::max(maxdev, std::fabs(scb.estimate_at(g, 0) - strict_block(0, t)));
                maxdev = std::max(maxdev, std::fabs(scb.estimate_at(g, 1) - strict_block(1, t)));
            }
        } else {
            const TimeSeriesPanel panel = make_trend_panel(dgp);
            if (spec.penalty.has_value()) {
                // the penalized procedure treats the shifted series as the
                // data, so tuning happens on the pseudo panel as well
                TimeSeriesPanel shifted = panel;
                for (int k = 0; k < shifted.p; ++k)
                    for (int i = 0; i < shifted.n; ++i)
                        shifted.col(k)[i] +=
                            penalize::penalty_lambda(*spec.penalty, shifted.time(i));
                tuning::resolve_trend_config(shifted, cfg);
                scb = penalize::penalized_scb(panel, cfg, *spec.penalty).scb;
            } else {
                tuning::resolve_trend_config(panel, cfg);
                scb = bootstrap::run_scb_trend(panel, cfg);
            }
            const TrendFamily truth = make_trends(
                dgp.p, dgp.model == Model::WeakMonotone ? TrendVariant::Weak
                                                        : TrendVariant::Strict);
            for (int g = 0; g < scb.G; ++g)
                for (int k = 0; k < scb.K; ++k)
                    maxdev = std::max(maxdev, std::fabs(scb.estimate_at(g, k) -
                                                        truth.eval_coord(scb.eval_grid[g], k)));
        }
        out.maxdev = maxdev;
        out.q.reserve(spec.config.alpha.size());
        for (double a : spec.config.alpha) out.q.push_back(scb.q_hat.at(a));
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

StudyResult coverage_study(const StudySpec& spec) {
    if (spec.runs < 1) throw InvalidConfig("study needs at least one run");
    std::vector<RunOutcome> outcomes(spec.runs);
    std::atomic<int> next{0};
    const int workers = std::max(1, std::min(spec.threads, spec.runs));
    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= spec.runs) break;
            outcomes[r] = run_once(spec, r);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    StudyResult result;
    result.alpha = spec.config.alpha;
    std::vector<int> covered(spec.config.alpha.size(), 0);
    std::vector<double> qsum(spec.config.alpha.size(), 0.0);
    for (const RunOutcome& out : outcomes) {
        if (!out.ok) {
            ++result.failures;
            if (result.failure_messages.size() < 5) result.failure_messages.push_back(out.error);
            continue;
        }
        ++result.runs_done;
        for (std::size_t a = 0; a < spec.config.alpha.size(); ++a) {
            if (out.maxdev <= out.q[a]) ++covered[a];
            qsum[a] += out.q[a];
        }
    }
    for (std::size_t a = 0; a < spec.config.alpha.size(); ++a) {
        const double alpha = spec.config.alpha[a];
        const double denom = std::max(1, result.runs_done);
        const double c = covered[a] / denom;
        result.coverage[alpha] = c;
        result.coverage_se[alpha] = std::sqrt(std::max(c * (1.0 - c), 0.0) / denom);
        result.mean_q[alpha] = qsum[a] / denom;
        // the width convention of the reference tables: the band radius q
        result.mean_width[alpha] = result.mean_q[alpha];
    }
    return result;
}

const char* model_name(Model m) {
    switch (m) {
        case Model::TrendA: return "a";
        case Model::TrendB: return "b";
        case Model::RegC: return "c";
        case Model::RegD: return "d";
        case Model::SkewExp: return "skew-exp";
        case Model::SkewLogNormal: return "skew-lognormal";
        case Model::WeakMonotone: return "weak";
    }
    return "?";
}

Model model_from_name(const std::string& name) {
    if (name == "a") return Model::TrendA;
    if (name == "b") return Model::TrendB;
    if (name == "c") return Model::RegC;
    if (name == "d") return Model::RegD;
    if (name == "skew-exp") return Model::SkewExp;
    if (name == "skew-lognormal") return Model::SkewLogNormal;
    if (name == "weak") return Model::WeakMonotone;
    throw InvalidConfig("unknown model name: " + name);
}

}  // namespace monoband::simgen
