#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "todakdv/actions.hpp"
#include "todakdv/asymptotics.hpp"
#include "todakdv/errors.hpp"
#include "todakdv/hill.hpp"
#include "todakdv/io.hpp"
#include "todakdv/jacobi.hpp"
#include "todakdv/kdv.hpp"
#include "todakdv/parallel.hpp"
#include "todakdv/quasimodes.hpp"
#include "todakdv/scenario.hpp"

namespace todakdv::cli {

struct Options {
    std::string study;
    std::string config;
    std::string out;
    std::string mode;
    std::string format = "csv";
    unsigned jobs = default_jobs();
    std::uint64_t seed = 0;
};

inline std::vector<EdgeMode> selected_modes(const std::string& m)
{
    if (m == "A") return {EdgeMode::A};
    if (m == "B") return {EdgeMode::B};
    if (m == "C") return {EdgeMode::C};
    if (m == "both") return {EdgeMode::A, EdgeMode::B};
    return {EdgeMode::A, EdgeMode::B, EdgeMode::C};
}

namespace detail {

inline std::vector<Edge> selected_edges(const std::string& e)
{
    if (e == "bottom") return {Edge::bottom};
    if (e == "top") return {Edge::top};
    return {Edge::bottom, Edge::top};
}

inline std::vector<FlowScaling> selected_flows(const std::string& f)
{
    if (f == "lattice") return {FlowScaling::lattice};
    if (f == "literal") return {FlowScaling::literal};
    return {FlowScaling::lattice, FlowScaling::literal};
}

inline std::vector<SymbolConvention> selected_symbols(const std::string& f)
{
    if (f == "lattice") return {SymbolConvention::lattice};
    if (f == "literal") return {SymbolConvention::literal};
    return {SymbolConvention::lattice, SymbolConvention::literal};
}

inline const char* flow_name(FlowScaling f) { return f == FlowScaling::lattice ? "lattice" : "literal"; }
inline const char* symbol_name(SymbolConvention s) { return s == SymbolConvention::lattice ? "lattice" : "literal"; }

inline void require_sizes(const Scenario& sc, std::size_t min)
{
    if (sc.N_list.size() < min)
        throw InvalidInput("study needs " + std::string(min > 1 ? "'N_list' with at least " + std::to_string(min) +
                                                                      " sizes"
                                                                : "'N' or 'N_list'"));
}

inline void warn_mean(const Scenario& sc, std::ostream& err)
{
    if (!sc.alpha.mean_zero() || !sc.beta.mean_zero())
        err << nlohmann::json{{"warning", "alpha or beta has nonzero mean; edge and bulk asymptotics assume zero mean"}}
                   .dump()
            << "\n";
}

inline void spectrum_study(const Scenario& sc, const Options& opt, io::StudyOutput& out)
{
    require_sizes(sc, 1);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    std::vector<double> lambdas(sc.random_lambdas);
    for (double& l : lambdas) l = U(rng);

    struct Result {
        SpectrumList dense, roots;
        double kappa = 1.0, res = 0.0, res_plain = 0.0, trace_error = 0.0;
        bool mean_zero = true;
    };
    const auto results = parallel_map(sc.N_list.size(), opt.jobs, [&](std::size_t i) {
        Result r;
        const JacobiData J = build_jacobi(sc.alpha, sc.beta, sc.N_list[i]);
        r.mean_zero = J.mean_zero;
        r.dense = dense_spectrum(J);
        r.roots = discriminant_roots(J);
        r.kappa = kappa(J);
        for (double l : lambdas) {
            r.res = std::max(r.res, product_formula_residual(J, l, r.dense, true));
            r.res_plain = std::max(r.res_plain, product_formula_residual(J, l, r.dense, false));
        }
        double tr = 0.0, sum = 0.0;
        for (double b : J.b) tr += 2.0 * b;
        for (double v : r.dense.values) sum += v;
        r.trace_error = std::abs(sum - tr);
        return r;
    });

    nlohmann::json entries = nlohmann::json::array();
    ConvergenceReport kappa_rep;
    kappa_rep.label = "kappa_minus_one";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const int N = sc.N_list[i];
        const Result& r = results[i];
        auto& t = out.table("spectrum_N" + std::to_string(N), {"j", "lambda"});
        for (std::size_t j = 0; j < r.dense.size(); ++j) t.add({j, r.dense[j]});
        double diff = 0.0;
        for (std::size_t j = 0; j < r.dense.size(); ++j) diff = std::max(diff, std::abs(r.dense[j] - r.roots[j]));
        entries.push_back({{"N", N},
                           {"kappa", r.kappa},
                           {"interlacing", r.dense.interlacing_ok()},
                           {"dual_solver_max_diff", diff},
                           {"product_residual_max", r.res},
                           {"product_residual_max_without_kappa", r.res_plain},
                           {"trace_error", r.trace_error},
                           {"mean_zero", r.mean_zero}});
        kappa_rep.N.push_back(N);
        kappa_rep.error.push_back(std::abs(r.kappa - 1.0));
    }
    kappa_rep.finish(0.0);
    out.summary()["spectra"] = entries;
    out.summary()["random_lambdas"] = lambdas;
    out.summary()["kappa"] = io::report_json(kappa_rep);
}

inline void hill_study(const Scenario& sc, const Options&, io::StudyOutput& out)
{
    const std::size_t count = static_cast<std::size_t>(sc.hill_count);
    for (HillSign sign : {HillSign::minus, HillSign::plus}) {
        const std::string name = sign == HillSign::minus ? "minus" : "plus";
        const HillOperator H = build_hill(sc.alpha, sc.beta, sign);
        const HillOperator Hl = lattice_scaled(H);
        const HillSpectrum s = hill_spectrum(H, count);
        const HillSpectrum sl = hill_spectrum(Hl, count);
        auto& t = out.table("hill_" + name,
                            {"j", "mu_combined", "lambda_modeA", "lambda_modeB", "lambda_modeC", "mu_floquet"});
        for (std::size_t j = 0; j < count; ++j)
            t.add({j, s.combined[j], s.periodic_only[j], 4.0 * s.combined[j], 4.0 * sl.combined[j],
                   s.combined_floquet[j]});
        nlohmann::json e{{"galerkin_floquet_max_diff", s.max_discrepancy}, {"truncation", s.truncation}};
        if (count >= 40) {
            nlohmann::json pr = nlohmann::json::array();
            for (double l : {-5.0, -1.0, 0.3}) {
                const ProductResidual r = hill_product_residual(H, l, s);
                pr.push_back({{"lambda", r.lambda}, {"residual", r.residual}, {"shifted", r.shifted}});
            }
            e["product_residuals"] = pr;
        }
        out.summary()[name] = e;
    }
}

inline void discriminant_tables(const DiscriminantStudy& st, const std::vector<int>& N_list, io::StudyOutput& out)
{
    const std::string edge = to_string(st.edge);
    auto& t = out.table("discriminant_" + edge,
                        {"N", "lambda", "toda", "target_literal", "target_calibrated", "target_lattice"});
    for (std::size_t i = 0; i < N_list.size(); ++i)
        for (std::size_t g = 0; g < st.grid.size(); ++g)
            t.add({N_list[i], st.grid[g], st.toda[i][g], st.target[0][g], st.target[1][g], st.target[2][g]});
    auto& c = out.table("discriminant_" + edge + "_convergence",
                        {"N", "error_literal", "error_calibrated", "error_lattice"});
    for (std::size_t i = 0; i < N_list.size(); ++i)
        c.add({N_list[i], st.reports[0].error[i], st.reports[1].error[i], st.reports[2].error[i]});
    nlohmann::json j;
    j["literal"] = io::report_json(st.reports[0]);
    j["calibrated"] = io::report_json(st.reports[1]);
    j["lattice"] = io::report_json(st.reports[2]);
    j["literal"]["strictly_decreasing"] = st.reports[0].strictly_decreasing();
    j["calibrated"]["strictly_decreasing"] = st.reports[1].strictly_decreasing();
    j["lattice"]["strictly_decreasing"] = st.reports[2].strictly_decreasing();
    out.summary()["discriminant"][edge] = j;
}

inline void discriminant_study(const Scenario& sc, const Options& opt, io::StudyOutput& out)
{
    require_sizes(sc, 1);
    const std::vector<double> grid = lambda_grid(sc.grid_lo, sc.grid_hi, static_cast<std::size_t>(sc.grid_points));
    for (Edge e : selected_edges(sc.edge))
        discriminant_tables(discriminant_convergence(sc.alpha, sc.beta, sc.N_list, grid, e, opt.jobs), sc.N_list, out);
}

inline void action_tables(const ActionStudy& st, const std::vector<EdgeMode>& modes, io::StudyOutput& out)
{
    for (std::size_t i = 0; i < st.N.size(); ++i) {
        auto& t = out.table("actions_N" + std::to_string(st.N[i]),
                            {"n", "I_toda_scaled_bottom", "target_minus_A", "target_minus_B", "I_toda_scaled_top",
                             "target_plus_A", "target_plus_B", "target_minus_C", "target_plus_C"});
        for (const ActionRow& r : st.tables[i])
            t.add({r.n, r.toda_bottom, r.target_minus[0], r.target_minus[1], r.toda_top, r.target_plus[0],
                   r.target_plus[1], r.target_minus[2], r.target_plus[2]});
    }
    nlohmann::json series = nlohmann::json::array();
    for (const auto& s : st.series) {
        if (std::find(modes.begin(), modes.end(), s.mode) == modes.end()) continue;
        nlohmann::json j = io::report_json(s.absolute, to_string(s.mode));
        j["n"] = s.n;
        j["edge"] = to_string(s.edge);
        j["target"] = s.target;
        j["relative_error"] = s.relative;
        j["strictly_decreasing"] = s.absolute.strictly_decreasing();
        series.push_back(j);
    }
    out.summary()["actions"]["series"] = series;
    nlohmann::json best = nlohmann::json::array();
    const int n_max = st.tables.empty() ? 0 : static_cast<int>(st.tables[0].size());
    for (int n = 1; n <= n_max; ++n)
        for (Edge e : {Edge::bottom, Edge::top}) {
            EdgeMode b = modes.front();
            for (EdgeMode m : modes)
                if (st.find(n, e, m).relative.back() < st.find(n, e, b).relative.back()) b = m;
            best.push_back({{"n", n}, {"edge", to_string(e)}, {"mode", to_string(b)},
                            {"relative_error", st.find(n, e, b).relative.back()}});
        }
    out.summary()["actions"]["best_mode"] = best;
}

inline void actions_study(const Scenario& sc, const Options& opt, io::StudyOutput& out)
{
    require_sizes(sc, 1);
    action_tables(action_convergence(sc.alpha, sc.beta, sc.N_list, sc.n_max, opt.jobs), selected_modes(sc.mode), out);
}

inline void kdv_study(const Scenario& sc, const Options& opt, io::StudyOutput& out)
{
    const std::size_t M = static_cast<std::size_t>(sc.kdv_grid);
    KdVOptions ko;
    ko.dt = sc.dt;
    std::vector<SpectrumList> s0;
    if (!sc.N_list.empty())
        s0 = parallel_map(sc.N_list.size(), opt.jobs,
                          [&](std::size_t i) { return dense_spectrum(build_jacobi(sc.alpha, sc.beta, sc.N_list[i])); });

    for (FlowScaling flow : selected_flows(sc.flow)) {
        const std::string fname = flow_name(flow);
        const double s = flow_scale(flow);
        std::array<KdVState, 2> u{state_from_profile(s * (-2.0 * sc.alpha - sc.beta), M),
                                  state_from_profile(s * (-2.0 * sc.alpha + sc.beta), M)};
        std::array<ConservedQuantities, 2> q0{conserved_quantities(u[0]), conserved_quantities(u[1])};
        auto& tp = out.table("kdv_" + fname + "_plus", {"t", "m1", "m2", "h"});
        auto& tm = out.table("kdv_" + fname + "_minus", {"t", "m1", "m2", "h"});
        auto& td = out.table("drift_" + fname, {"t", "N", "max_drift"});
        double dm1 = 0, dm2 = 0, dh = 0, terr = 0;
        std::vector<double> final_drift;
        for (int k = 0; k <= sc.time_samples; ++k) {
            const double t = sc.t_final * k / sc.time_samples;
            if (k > 0) {
                const double step = t - u[0].t;
                for (auto& st : u) {
                    const KdVResult r = kdv_evolve(st, step, ko);
                    terr = std::max(terr, r.time_error);
                    st = r.state;
                    st.t = t;
                }
            }
            for (int p = 0; p < 2; ++p) {
                const ConservedQuantities q = conserved_quantities(u[p]);
                (p == 0 ? tp : tm).add({t, q.m1, q.m2, q.h});
                dm1 = std::max(dm1, std::abs(q.m1 - q0[p].m1));
                dm2 = std::max(dm2, std::abs(q.m2 - q0[p].m2));
                dh = std::max(dh, std::abs(q.h - q0[p].h));
            }
            if (sc.N_list.empty()) continue;
            KdVState up = u[0], um = u[1];
            for (double& x : up.u) x /= s;
            for (double& x : um.u) x /= s;
            const EvolvedPair ev = reconstruct_pair(up, um, sc.alpha.mean_zero(), sc.beta.mean_zero(), sc.beta.is_zero());
            const auto drift = parallel_map(sc.N_list.size(), opt.jobs, [&](std::size_t i) {
                const SpectrumList st = dense_spectrum(build_jacobi(ev.alpha, ev.beta, sc.N_list[i]));
                double d = 0.0;
                for (std::size_t j = 0; j < st.size(); ++j) d = std::max(d, std::abs(st[j] - s0[i][j]));
                return d;
            });
            for (std::size_t i = 0; i < drift.size(); ++i) td.add({t, sc.N_list[i], drift[i]});
            final_drift = drift;
        }
        nlohmann::json j{{"m1_drift", dm1}, {"m2_drift", dm2}, {"h_drift", dh}, {"time_error", terr}};
        if (!final_drift.empty()) {
            ConvergenceReport r;
            r.label = "spectral_drift_" + fname;
            r.N = sc.N_list;
            r.error = final_drift;
            r.finish();
            j["spectral_drift"] = io::report_json(r);
        }
        out.summary()["kdv"][fname] = j;
    }
}

inline void quasimode_study(const Scenario& sc, const Options& opt, io::StudyOutput& out)
{
    require_sizes(sc, 1);
    for (SymbolConvention conv : selected_symbols(sc.symbol)) {
        const std::string cname = symbol_name(conv);
        const std::size_t nk = sc.k_list.size();
        const auto res = parallel_map(sc.N_list.size() * nk, opt.jobs, [&](std::size_t i) {
            return quasimode_residual(sc.k_list[i % nk], sc.mu, sc.alpha, sc.beta, sc.N_list[i / nk], conv);
        });
        auto& t = out.table("quasimode_" + cname, {"N", "k", "residual", "eps", "eps_cubed"});
        for (std::size_t i = 0; i < res.size(); ++i) {
            const int N = sc.N_list[i / nk];
            const double eps = 1.0 / (2.0 * N);
            t.add({N, sc.k_list[i % nk], res[i], eps, eps * eps * eps});
        }
        nlohmann::json fits = nlohmann::json::array();
        for (std::size_t k = 0; k < nk; ++k) {
            ConvergenceReport r;
            r.label = "quasimode_" + cname + "_k" + std::to_string(sc.k_list[k]);
            for (std::size_t n = 0; n < sc.N_list.size(); ++n) {
                r.N.push_back(sc.N_list[n]);
                r.error.push_back(res[n * nk + k]);
            }
            r.finish();
            nlohmann::json j = io::report_json(r);
            j["rate_in_eps"] = r.fit.determinate ? nlohmann::json(-r.fit.slope) : nlohmann::json(nullptr);
            fits.push_back(j);
        }
        out.summary()["quasimode"][cname] = fits;
    }
}

inline void converge_study(const Scenario& sc, const Options& opt, io::StudyOutput& out)
{
    require_sizes(sc, 3);
    std::vector<int> Ns = sc.N_list;
    if (!std::is_sorted(Ns.begin(), Ns.end())) throw InvalidInput("'N_list' must be ascending for converge");
    if (Ns.front() < 16) throw InvalidInput("converge needs N >= 16");
    const std::vector<EdgeMode> modes = selected_modes(sc.mode);
    const auto sweep = toda_sweep(sc.alpha, sc.beta, Ns, opt.jobs);
    const std::size_t count = std::max(edge_count(Ns.back()), 2 * static_cast<std::size_t>(sc.n_max) + 2);
    const HillPair hp = hill_pair(sc.alpha, sc.beta, count);

    const EdgeStudy es = edge_study(sweep, hp);
    for (Edge e : {Edge::bottom, Edge::top}) {
        std::vector<std::string> cols{"N", "j", "lambda"};
        for (EdgeMode m : modes) cols.push_back(std::string("prediction_") + to_string(m));
        for (EdgeMode m : modes) cols.push_back(std::string("error_") + to_string(m));
        auto& t = out.table(std::string("edge_") + to_string(e), cols);
        for (const auto& r : es.reports)
            for (const auto& row : r.rows(e)) {
                std::vector<io::Cell> c{r.N, row.j, row.lambda};
                for (EdgeMode m : modes) c.emplace_back(row.prediction[static_cast<int>(m)]);
                for (EdgeMode m : modes) c.emplace_back(row.error[static_cast<int>(m)]);
                t.add(std::move(c));
            }
        nlohmann::json ej;
        EdgeMode best = modes.front();
        double best_err = std::numeric_limits<double>::infinity();
        for (EdgeMode m : modes) {
            nlohmann::json arr = nlohmann::json::array();
            double w = 0.0;
            for (const auto& c : es.series[static_cast<int>(e)][static_cast<int>(m)]) {
                arr.push_back(io::report_json(c, to_string(m)));
                w = std::max(w, c.error.back());
            }
            ej[to_string(m)] = arr;
            if (w < best_err) {
                best_err = w;
                best = m;
            }
        }
        ej["best_mode"] = to_string(best);
        out.summary()["edge"][to_string(e)] = ej;
    }
    auto& bt = out.table("bulk", {"N", "error"});
    for (std::size_t i = 0; i < Ns.size(); ++i) bt.add({es.bulk.N[i], es.bulk.error[i]});
    out.summary()["bulk"] = io::report_json(es.bulk);

    const std::vector<double> grid = lambda_grid(sc.grid_lo, sc.grid_hi, static_cast<std::size_t>(sc.grid_points));
    for (Edge e : {Edge::bottom, Edge::top})
        discriminant_tables(discriminant_convergence(sc.alpha, sc.beta, Ns, grid, e, opt.jobs), Ns, out);

    action_tables(action_convergence(sweep, hp, sc.n_max, opt.jobs), modes, out);
}

inline void error_json(std::ostream& err, const char* kind, const std::string& msg)
{
    err << nlohmann::json{{"error", kind}, {"message", msg}}.dump() << "\n";
}

} // namespace detail

/// Run one study; writes outputs and returns the process exit code.
inline int run_study(const Options& opt, std::ostream& err = std::cerr)
{
    try {
        if (opt.config.empty()) throw InvalidInput("--config is required");
        Scenario sc = load_scenario(opt.config);
        if (!sc.study.empty() && sc.study != opt.study)
            throw InvalidInput("config is for study '" + sc.study + "', not '" + opt.study + "'");
        sc.study = opt.study;
        if (!opt.mode.empty()) sc.mode = opt.mode;
        nlohmann::json config = sc.to_json();
        if (!opt.out.empty()) sc.output = opt.out;
        if (opt.format != "csv" && opt.format != "json") throw InvalidInput("--format must be csv or json");
        detail::warn_mean(sc, err);

        io::StudyOutput out(opt.study);
        out.summary()["config"] = config;
        out.summary()["config"]["seed"] = opt.seed;
        out.summary()["config"]["format"] = opt.format;

        if (opt.study == "spectrum") detail::spectrum_study(sc, opt, out);
        else if (opt.study == "hill") detail::hill_study(sc, opt, out);
        else if (opt.study == "discriminant") detail::discriminant_study(sc, opt, out);
        else if (opt.study == "actions") detail::actions_study(sc, opt, out);
        else if (opt.study == "kdv") detail::kdv_study(sc, opt, out);
        else if (opt.study == "quasimode") detail::quasimode_study(sc, opt, out);
        else if (opt.study == "converge") detail::converge_study(sc, opt, out);
        else throw InvalidInput("unknown study '" + opt.study + "'");

        out.write(sc.output, opt.format == "json" ? io::Format::json : io::Format::csv);
        return 0;
    } catch (const InvalidInput& e) {
        detail::error_json(err, "config", e.what());
        return 2;
    } catch (const NumericalFailure& e) {
        detail::error_json(err, "numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        detail::error_json(err, "numerical", e.what());
        return 3;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Toda lattice / KdV spectral correspondence studies"};
    app.require_subcommand(1, 1);
    Options opt;
    for (const auto& name : study_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " study");
        sub->add_option("--config", opt.config, "scenario JSON file")->required();
        sub->add_option("--out", opt.out, "output directory (overrides 'output')");
        sub->add_option("--mode", opt.mode, "edge conventions: A, B, C, both (A and B), all")
            ->check(CLI::IsMember({"A", "B", "C", "both", "all"}));
        sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--jobs", opt.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "seed for randomized spectral checks");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        detail::error_json(err, "config", e.what());
        return 2;
    }
    for (const auto& name : study_names())
        if (app.got_subcommand(name)) opt.study = name;
    return run_study(opt, err);
}

} // namespace todakdv::cli
