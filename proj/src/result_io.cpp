#include <fstream>

#include <json.hpp>

#include "monoband/errors.hpp"
#include "monoband/io.hpp"

namespace monoband::io {

namespace {
using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string alpha_key(double a) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", a);
    return buf;
}
}  // namespace

std::string result_json(const std::string& mode, const ScbResult& scb) {
    ordered root;
    root["mode"] = mode;
    root["n"] = scb.n;
    root["p"] = scb.K;
    root["alpha"] = scb.alpha;
    ordered qhat;
    for (double a : scb.alpha) qhat[alpha_key(a)] = scb.q_hat.at(a);
    root["q_hat"] = std::move(qhat);
    root["domain"] = {scb.domain.lo, scb.domain.hi};
    root["grid"] = scb.eval_grid;

    auto matrix_for = [&](double shift) {
        ordered rows = ordered::array();
        for (int g = 0; g < scb.G; ++g) {
            ordered row = ordered::array();
            for (int k = 0; k < scb.K; ++k) row.push_back(scb.estimate_at(g, k) + shift);
            rows.push_back(std::move(row));
        }
        return rows;
    };
    root["estimate"] = matrix_for(0.0);
    ordered lower, upper;
    for (double a : scb.alpha) {
        lower[alpha_key(a)] = matrix_for(-scb.q_hat.at(a));
        upper[alpha_key(a)] = matrix_for(scb.q_hat.at(a));
    }
    root["lower"] = std::move(lower);
    root["upper"] = std::move(upper);

    ordered config;
    config["hr"] = scb.config.hr;
    config["hd"] = scb.config.hd;
    config["N"] = scb.config.N;
    config["L"] = scb.config.L;
    config["B"] = scb.config.B;
    config["G"] = scb.G;
    root["config"] = std::move(config);
    root["seed"] = scb.seed;
    return root.dump(2) + "\n";
}

void write_result_json(const std::string& path, const std::string& mode, const ScbResult& scb) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << result_json(mode, scb);
}

}  // namespace monoband::io
