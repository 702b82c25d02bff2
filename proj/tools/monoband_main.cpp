// monoband: monotone trend / time-varying coefficient estimation with joint
// simultaneous confidence bands, plus the simulation and test harnesses.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monoband/bootstrap.hpp"
#include "monoband/errors.hpp"
#include "monoband/hypotest.hpp"
#include "monoband/io.hpp"
#include "monoband/penalize.hpp"
#include "monoband/simgen.hpp"
#include "monoband/tuning.hpp"

namespace {

using monoband::BandwidthConfig;
using monoband::ScbResult;
using monoband::TimeSeriesPanel;
using nlohmann::json;
using ordered = nlohmann::ordered_json;

int hardware_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    int threads = hw == 0 ? 1 : static_cast<int>(hw);
    if (const char* cap = std::getenv("MONOBAND_THREADS")) {
        const int limit = std::atoi(cap);
        if (limit >= 1) threads = std::min(threads, limit);
    }
    return threads;
}

struct CommonOptions {
    std::string input;
    std::string output_dir = ".";
    std::string config_path;
    std::vector<double> alpha = {0.10, 0.05};
    double hr = 0.0;
    double hd = 0.0;
    int N = 4000;
    int L = 0;
    int B = 2000;
    int G = 0;
    std::uint64_t seed = 0;
    double ridge = 0.0;
    bool interpolate = false;
    bool check_seasonality = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_input) {
    if (needs_input)
        cmd->add_option("--input", opt.input, "input CSV path")->required();
    cmd->add_option("--output", opt.output_dir, "output directory");
    cmd->add_option("--config", opt.config_path, "JSON config file (same keys as flags)");
    cmd->add_option("--alpha", opt.alpha, "band levels")->delimiter(',');
    cmd->add_option("--hr", opt.hr, "regression bandwidth (default: GCV)");
    cmd->add_option("--hd", opt.hd, "rearrangement bandwidth (default: rule)");
    cmd->add_option("--N", opt.N, "rearrangement grid size");
    cmd->add_option("--L", opt.L, "block length (default: minimum volatility)");
    cmd->add_option("--B", opt.B, "bootstrap sample size");
    cmd->add_option("--grid", opt.G, "evaluation grid size (default min(400, n))");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--ridge", opt.ridge, "ridge added to the design moment matrix");
    cmd->add_flag("--interpolate-missing", opt.interpolate,
                  "linearly interpolate missing cells");
    cmd->add_flag("--check-seasonality", opt.check_seasonality,
                  "warn on strong lag-12 autocorrelation");
    cmd->add_option("--threads", opt.threads, "worker threads (default: all, capped by env)");
}

void apply_config_file(const CLI::App* cmd, CommonOptions& opt) {
    if (opt.config_path.empty()) return;
    std::ifstream in(opt.config_path);
    if (!in) throw monoband::ParseError("cannot open config file: " + opt.config_path);
    json cfg = json::parse(in);
    auto unset = [&](const char* flag) { return cmd->count(flag) == 0; };
    if (cfg.contains("alpha") && unset("--alpha")) opt.alpha = cfg["alpha"].get<std::vector<double>>();
    if (cfg.contains("hr") && unset("--hr")) opt.hr = cfg["hr"].get<double>();
    if (cfg.contains("hd") && unset("--hd")) opt.hd = cfg["hd"].get<double>();
    if (cfg.contains("N") && unset("--N")) opt.N = cfg["N"].get<int>();
    if (cfg.contains("L") && unset("--L")) opt.L = cfg["L"].get<int>();
    if (cfg.contains("B") && unset("--B")) opt.B = cfg["B"].get<int>();
    if (cfg.contains("grid") && unset("--grid")) opt.G = cfg["grid"].get<int>();
    if (cfg.contains("seed") && unset("--seed")) opt.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("ridge") && unset("--ridge")) opt.ridge = cfg["ridge"].get<double>();
    if (cfg.contains("threads") && unset("--threads")) opt.threads = cfg["threads"].get<int>();
    if (cfg.contains("interpolate-missing") && !opt.interpolate)
        opt.interpolate = cfg["interpolate-missing"].get<bool>();
}

BandwidthConfig to_config(const CommonOptions& opt) {
    BandwidthConfig cfg;
    if (opt.hr > 0.0) cfg.hr = {opt.hr};
    if (opt.hd > 0.0) cfg.hd = {opt.hd};
    cfg.N = opt.N;
    cfg.L = opt.L;
    cfg.B = opt.B;
    cfg.G = opt.G;
    cfg.alpha = opt.alpha;
    cfg.seed = opt.seed;
    cfg.ridge = opt.ridge;
    cfg.threads = opt.threads > 0 ? opt.threads : hardware_threads();
    return cfg;
}

monoband::linalg::Mat parse_contrast(const std::string& text, int p) {
    if (text.empty()) return monoband::linalg::identity(p);
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::vector<double> vals;
        std::stringstream rs(row);
        std::string cell;
        while (std::getline(rs, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<int>(vals.size()) != p)
            throw monoband::InvalidConfig("contrast row needs " + std::to_string(p) + " entries");
        rows.push_back(std::move(vals));
    }
    monoband::linalg::Mat c(static_cast<int>(rows.size()), p);
    for (int r = 0; r < c.rows; ++r)
        for (int j = 0; j < p; ++j) c(r, j) = rows[r][j];
    return c;
}

void warn_seasonality(const CommonOptions& opt, const TimeSeriesPanel& panel) {
    if (!opt.check_seasonality) return;
    const double rho = monoband::io::lag12_autocorrelation(panel);
    if (rho > 0.3)
        std::cerr << "warning: strong lag-12 autocorrelation (" << rho
                  << "); consider deseasonalizing the input first\n";
}

void write_outputs(const std::string& mode, const CommonOptions& opt, const ScbResult& scb) {
    monoband::io::write_result_json(opt.output_dir + "/result.json", mode, scb);
    monoband::io::write_bands_csv(opt.output_dir + "/bands.csv", scb);
    std::cout << "wrote " << opt.output_dir << "/result.json and bands.csv (domain ["
              << scb.domain.lo << ", " << scb.domain.hi << "])\n";
}

int run_trend(const CLI::App* cmd, CommonOptions& opt, double penalize_c1) {
    apply_config_file(cmd, opt);
    TimeSeriesPanel panel = monoband::io::ingest_csv(opt.input, false, opt.interpolate);
    warn_seasonality(opt, panel);
    BandwidthConfig cfg = to_config(opt);
    monoband::tuning::resolve_trend_config(panel, cfg);
    if (penalize_c1 > 0.0) {
        const auto sel = monoband::penalize::select_c1(panel, cfg, penalize_c1);
        if (!sel.monotone_found)
            std::cerr << "warning: no ladder step restored monotonicity; using the smallest\n";
        write_outputs("trend", opt, sel.fit.scb);
    } else {
        write_outputs("trend", opt, monoband::bootstrap::run_scb_trend(panel, cfg));
    }
    return 0;
}

int run_regression(const CLI::App* cmd, CommonOptions& opt, const std::string& contrast_text,
                   bool no_intercept) {
    apply_config_file(cmd, opt);
    TimeSeriesPanel panel = monoband::io::ingest_csv(opt.input, true, opt.interpolate,
                                                     !no_intercept);
    BandwidthConfig cfg = to_config(opt);
    monoband::tuning::resolve_regression_config(panel.y.data(), panel.x.data(), panel.n,
                                                panel.px, cfg);
    const auto contrast = parse_contrast(contrast_text, panel.px);
    const ScbResult scb = monoband::bootstrap::run_scb_regression(
        panel.y.data(), panel.x.data(), panel.n, panel.px, contrast, cfg);
    write_outputs("regression", opt, scb);
    return 0;
}

int run_tune(const CLI::App* cmd, CommonOptions& opt, bool regression_mode) {
    apply_config_file(cmd, opt);
    TimeSeriesPanel panel = monoband::io::ingest_csv(opt.input, regression_mode, opt.interpolate);
    BandwidthConfig cfg = to_config(opt);
    if (regression_mode)
        monoband::tuning::resolve_regression_config(panel.y.data(), panel.x.data(), panel.n,
                                                    panel.px, cfg);
    else
        monoband::tuning::resolve_trend_config(panel, cfg);
    ordered out;
    out["hr"] = cfg.hr;
    out["hd"] = cfg.hd;
    out["L"] = cfg.L;
    out["G"] = cfg.G;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_simulate(const CLI::App* cmd, CommonOptions& opt, const std::string& model, int n,
                 int p, int runs, double penalize_c1, const std::string& out_path) {
    apply_config_file(cmd, opt);
    monoband::simgen::StudySpec spec;
    spec.dgp.model = monoband::simgen::model_from_name(model);
    spec.dgp.n = n;
    spec.dgp.p = p;
    spec.dgp.seed = opt.seed;
    spec.runs = runs;
    spec.config = to_config(opt);
    spec.threads = spec.config.threads;
    if (penalize_c1 > 0.0)
        spec.penalty = monoband::penalize::PenaltyConfig::from_c1(penalize_c1);
    const auto result = monoband::simgen::coverage_study(spec);

    ordered out;
    out["model"] = model;
    out["n"] = n;
    out["p"] = p;
    out["runs"] = result.runs_done;
    out["failures"] = result.failures;
    out["B"] = spec.config.B;
    out["alpha"] = spec.config.alpha;
    ordered coverage, se, width;
    char key[32];
    for (double a : spec.config.alpha) {
        std::snprintf(key, sizeof(key), "%g", a);
        coverage[key] = result.coverage.at(a);
        se[key] = result.coverage_se.at(a);
        width[key] = result.mean_width.at(a);
    }
    out["coverage"] = std::move(coverage);
    out["coverage_se"] = std::move(se);
    out["mean_width"] = std::move(width);
    out["seed"] = opt.seed;
    const std::string text = out.dump(2) + "\n";
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << text;
    }
    std::cout << text;
    return 0;
}

int run_test(const CLI::App* cmd, CommonOptions& opt, bool quadratic, double t0, double t1,
             double increase_c, double delta) {
    apply_config_file(cmd, opt);
    TimeSeriesPanel panel = monoband::io::ingest_csv(opt.input, false, opt.interpolate);
    BandwidthConfig cfg = to_config(opt);
    monoband::tuning::resolve_trend_config(panel, cfg);
    const ScbResult scb = monoband::bootstrap::run_scb_trend(panel, cfg);

    ordered out;
    ordered tests = ordered::array();
    const double alpha = cfg.alpha.front();
    if (quadratic) {
        const auto r = monoband::hypotest::test_quadratic_trend(scb, panel, alpha);
        ordered t;
        t["name"] = "quadratic-trend";
        t["alpha"] = alpha;
        t["reject"] = r.reject;
        t["p_value"] = *r.p_value;
        tests.push_back(std::move(t));
    }
    if (t1 > t0) {
        const auto r = monoband::hypotest::test_increase_span(scb, t0, t1, increase_c, alpha);
        ordered t;
        t["name"] = "increase-span";
        t["t0"] = t0;
        t["t1"] = t1;
        t["C"] = increase_c;
        t["alpha"] = alpha;
        t["reject"] = r.reject;
        t["p_value"] = *r.p_value;
        if (r.witness_coordinate) t["witness_coordinate"] = *r.witness_coordinate;
        tests.push_back(std::move(t));
    }
    if (delta > 0.0) {
        const auto r = monoband::hypotest::test_increase_window(scb, delta, increase_c, alpha);
        ordered t;
        t["name"] = "increase-window";
        t["delta"] = delta;
        t["C"] = increase_c;
        t["alpha"] = alpha;
        t["reject"] = r.reject;
        t["p_value"] = *r.p_value;
        tests.push_back(std::move(t));
    }
    out["tests"] = std::move(tests);
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"monotone trends and time-varying coefficients with joint "
                 "simultaneous confidence bands"};
    app.require_subcommand(1);

    CommonOptions trend_opt, reg_opt, tune_opt, sim_opt, test_opt;

    auto* trend = app.add_subcommand("trend", "monotone trend bands for a panel CSV");
    add_common(trend, trend_opt, true);
    double trend_penalize = 0.0;
    trend->add_option("--penalize-c1", trend_penalize,
                      "penalized bands for weakly monotone trends (initial C1)");

    auto* reg = app.add_subcommand("regression", "monotone coefficient bands for y ~ x(t)");
    add_common(reg, reg_opt, true);
    std::string contrast_text;
    bool no_intercept = false;
    reg->add_option("--contrast", contrast_text, "contrast rows, e.g. \"0,1\" or \"1,0;0,1\"");
    reg->add_flag("--no-intercept", no_intercept, "do not prepend an intercept column");

    auto* tune = app.add_subcommand("tune", "report GCV/rule/MV tuning for an input");
    add_common(tune, tune_opt, true);
    bool tune_regression = false;
    tune->add_flag("--regression", tune_regression, "tune in regression mode");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo coverage study");
    add_common(sim, sim_opt, false);
    std::string model = "a";
    int sim_n = 500, sim_p = 9, sim_runs = 400;
    double sim_penalize = 0.0;
    std::string sim_out;
    sim->add_option("--model", model, "a|b|c|d|skew-exp|skew-lognormal|weak");
    sim->add_option("--n", sim_n, "sample size");
    sim->add_option("--p", sim_p, "panel dimension (trend models)");
    sim->add_option("--runs", sim_runs, "Monte Carlo runs");
    sim->add_option("--penalize-c1", sim_penalize, "penalized bands with this C1");
    sim->add_option("--out", sim_out, "also write the study record to this path");

    auto* test = app.add_subcommand("test", "band-based hypothesis tests on a panel CSV");
    add_common(test, test_opt, true);
    bool quadratic = false;
    double t0 = 0.0, t1 = 0.0, increase_c = 0.5, delta = 0.0;
    test->add_flag("--quadratic", quadratic, "joint quadratic-trend band test");
    test->add_option("--t0", t0, "increase test: left endpoint");
    test->add_option("--t1", t1, "increase test: right endpoint");
    test->add_option("--increase", increase_c, "increase amount C");
    test->add_option("--delta", delta, "window test: maximum span length");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*trend) return run_trend(trend, trend_opt, trend_penalize);
        if (*reg) return run_regression(reg, reg_opt, contrast_text, no_intercept);
        if (*tune) return run_tune(tune, tune_opt, tune_regression);
        if (*sim)
            return run_simulate(sim, sim_opt, model, sim_n, sim_p, sim_runs, sim_penalize,
                                sim_out);
        if (*test) return run_test(test, test_opt, quadratic, t0, t1, increase_c, delta);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
