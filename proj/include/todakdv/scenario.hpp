#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "todakdv/errors.hpp"
#include "todakdv/profile.hpp"

namespace todakdv {

inline PeriodicProfile profile_from_json(const nlohmann::json& j, const std::string& where)
{
    if (!j.is_object()) throw InvalidInput(where + ": profile must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "c0" && it.key() != "cos" && it.key() != "sin")
            throw InvalidInput(where + ": unknown profile key '" + it.key() + "'");
    try {
        const double c0 = j.value("c0", 0.0);
        const auto c = j.value("cos", std::vector<double>{});
        const auto s = j.value("sin", std::vector<double>{});
        return profile_from_fourier(c0, c, s);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(where + ": " + e.what());
    } catch (const InvalidInput& e) {
        throw InvalidInput(where + ": " + e.what());
    }
}

inline nlohmann::json profile_to_json(const PeriodicProfile& p)
{
    return {{"c0", p.constant()}, {"cos", p.cos_coefficients()}, {"sin", p.sin_coefficients()}};
}

inline const std::vector<std::string>& study_names()
{
    static const std::vector<std::string> names{"spectrum", "hill", "discriminant", "actions",
                                                "kdv", "quasimode", "converge"};
    return names;
}

/// Study configuration. Every key is optional except those a study needs
/// (N or N_list); unknown keys are rejected.
struct Scenario {
    PeriodicProfile alpha, beta;
    std::vector<int> N_list;
    std::string study;
    std::string mode = "all";           // A, B, C, both (A and B), all
    double t_final = 0.05;
    int time_samples = 4;
    int kdv_grid = 256;
    double dt = 1e-4;
    std::string flow = "both";          // lattice, literal, both
    int n_max = 2;
    double grid_lo = -2.0, grid_hi = 40.0;
    int grid_points = 85;
    std::string edge = "both";          // bottom, top, both
    int hill_count = 10;
    std::vector<int> k_list{0};
    FourierList mu{{0, 1.0}};
    std::string symbol = "both";        // lattice, literal, both
    int random_lambdas = 20;
    std::string output = "out";

    nlohmann::json to_json() const
    {
        nlohmann::json mj = nlohmann::json::array();
        for (auto [l, c] : mu) mj.push_back({{"l", l}, {"re", c.real()}, {"im", c.imag()}});
        return {{"alpha", profile_to_json(alpha)},
                {"beta", profile_to_json(beta)},
                {"N_list", N_list},
                {"study", study},
                {"mode", mode},
                {"t_final", t_final},
                {"time_samples", time_samples},
                {"kdv_grid", kdv_grid},
                {"dt", dt},
                {"flow", flow},
                {"n_max", n_max},
                {"lambda_grid", {{"lo", grid_lo}, {"hi", grid_hi}, {"points", grid_points}}},
                {"edge", edge},
                {"hill_count", hill_count},
                {"k_list", k_list},
                {"mu", mj},
                {"symbol", symbol},
                {"random_lambdas", random_lambdas},
                {"output", output}};
    }
};

namespace detail {

inline void require_choice(const std::string& key, const std::string& v, std::initializer_list<const char*> ok)
{
    for (const char* o : ok)
        if (v == o) return;
    throw InvalidInput("'" + key + "' has invalid value '" + v + "'");
}

} // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw InvalidInput("scenario must be a JSON object");
    static const std::set<std::string> known{"alpha", "beta", "N", "N_list", "study", "mode", "t_final",
                                             "time_samples", "kdv_grid", "dt", "flow", "n_max", "lambda_grid",
                                             "edge", "hill_count", "k_list", "mu", "symbol", "random_lambdas",
                                             "output"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw InvalidInput("unknown scenario key '" + it.key() + "'");

    Scenario s;
    try {
        if (j.contains("alpha")) s.alpha = profile_from_json(j["alpha"], "alpha");
        if (j.contains("beta")) s.beta = profile_from_json(j["beta"], "beta");
        if (j.contains("N") && j.contains("N_list")) throw InvalidInput("give either 'N' or 'N_list', not both");
        if (j.contains("N")) s.N_list = {j["N"].get<int>()};
        if (j.contains("N_list")) s.N_list = j["N_list"].get<std::vector<int>>();
        for (int N : s.N_list)
            if (N < 2) throw InvalidInput("N must be at least 2");
        s.study = j.value("study", "");
        s.mode = j.value("mode", s.mode);
        s.t_final = j.value("t_final", s.t_final);
        s.time_samples = j.value("time_samples", s.time_samples);
        s.kdv_grid = j.value("kdv_grid", s.kdv_grid);
        s.dt = j.value("dt", s.dt);
        s.flow = j.value("flow", s.flow);
        s.n_max = j.value("n_max", s.n_max);
        if (j.contains("lambda_grid")) {
            const auto& g = j["lambda_grid"];
            if (!g.is_object()) throw InvalidInput("'lambda_grid' must be an object");
            for (auto it = g.begin(); it != g.end(); ++it)
                if (it.key() != "lo" && it.key() != "hi" && it.key() != "points")
                    throw InvalidInput("unknown lambda_grid key '" + it.key() + "'");
            s.grid_lo = g.value("lo", s.grid_lo);
            s.grid_hi = g.value("hi", s.grid_hi);
            s.grid_points = g.value("points", s.grid_points);
        }
        s.edge = j.value("edge", s.edge);
        s.hill_count = j.value("hill_count", s.hill_count);
        if (j.contains("k_list")) s.k_list = j["k_list"].get<std::vector<int>>();
        if (j.contains("mu")) {
            s.mu.clear();
            for (const auto& e : j["mu"]) {
                if (!e.is_object()) throw InvalidInput("'mu' entries must be objects {l, re, im}");
                for (auto it = e.begin(); it != e.end(); ++it)
                    if (it.key() != "l" && it.key() != "re" && it.key() != "im")
                        throw InvalidInput("unknown mu key '" + it.key() + "'");
                s.mu[e.at("l").get<int>()] += std::complex<double>(e.value("re", 0.0), e.value("im", 0.0));
            }
        }
        s.symbol = j.value("symbol", s.symbol);
        s.random_lambdas = j.value("random_lambdas", s.random_lambdas);
        s.output = j.value("output", s.output);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("scenario: ") + e.what());
    }

    if (!s.study.empty()) {
        bool ok = false;
        for (const auto& n : study_names()) ok = ok || n == s.study;
        if (!ok) throw InvalidInput("unknown study '" + s.study + "'");
    }
    detail::require_choice("mode", s.mode, {"A", "B", "C", "both", "all"});
    detail::require_choice("flow", s.flow, {"lattice", "literal", "both"});
    detail::require_choice("edge", s.edge, {"bottom", "top", "both"});
    detail::require_choice("symbol", s.symbol, {"lattice", "literal", "both"});
    if (!(s.t_final >= 0.0) || !std::isfinite(s.t_final)) throw InvalidInput("'t_final' must be finite and >= 0");
    if (!(s.dt > 0.0)) throw InvalidInput("'dt' must be positive");
    if (s.time_samples < 1) throw InvalidInput("'time_samples' must be >= 1");
    if (s.n_max < 1) throw InvalidInput("'n_max' must be >= 1");
    if (s.hill_count < 1) throw InvalidInput("'hill_count' must be >= 1");
    if (s.grid_points < 2 || !(s.grid_hi > s.grid_lo)) throw InvalidInput("'lambda_grid' needs lo < hi, points >= 2");
    if (s.random_lambdas < 0) throw InvalidInput("'random_lambdas' must be >= 0");
    return s;
}

inline Scenario load_scenario(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw InvalidInput("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

} // namespace todakdv
