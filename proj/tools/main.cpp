// nlcross command-line driver.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlcross/io.hpp"

using namespace nlcross;

namespace {

struct Flags {
    double alpha = 0, gamma = 0, rabi = 0, t_max = 0, rel_tol = 0, abs_tol = 0, x0_fit = 0;
    int terms = 0, grid = 0, jobs = 0, grid_points = 0;
    std::string config, out, seed, method, variant, prefactor, sweep_parameter;
    std::vector<double> sweep_values;
    std::vector<std::string> emit, no_emit;
};

// Options shared by every subcommand; the returned map lets us tell which ones were given.
std::map<std::string, CLI::Option*> add_common(CLI::App* app, Flags& f) {
    std::map<std::string, CLI::Option*> o;
    o["config"] = app->add_option("--config", f.config, "JSON config file; flags override it")->check(CLI::ExistingFile);
    o["alpha"] = app->add_option("--alpha", f.alpha, "linear sweep rate");
    o["gamma"] = app->add_option("--gamma", f.gamma, "cubic sweep coefficient");
    o["rabi"] = app->add_option("--rabi", f.rabi, "coupling |f|");
    o["t_max"] = app->add_option("--t-max", f.t_max, "integration window [-t_max, t_max]");
    o["rel_tol"] = app->add_option("--rel-tol", f.rel_tol, "integrator relative tolerance");
    o["abs_tol"] = app->add_option("--abs-tol", f.abs_tol, "integrator absolute tolerance");
    o["grid_points"] = app->add_option("--grid-points", f.grid_points, "output samples over the window");
    o["seed"] = app->add_option("--seed", f.seed, "initial-amplitude convention: adiabatic | paper-wkb");
    o["terms"] = app->add_option("--terms", f.terms, "Stokes series truncation N");
    o["method"] = app->add_option("--method", f.method, "T1 evaluation: numeric | series");
    o["variant"] = app->add_option("--variant", f.variant, "recursion coefficients: corrected | verbatim");
    o["prefactor"] = app->add_option("--prefactor", f.prefactor, "Stokes probability prefactor: corrected | paper");
    o["x0_fit"] = app->add_option("--x0-fit", f.x0_fit, "region-I fit point in x = t^2 (default 0.9 t_max^2)");
    o["grid"] = app->add_option("--grid", f.grid, "number of x* candidates");
    o["jobs"] = app->add_option("--jobs", f.jobs, "worker threads");
    o["out"] = app->add_option("--out", f.out, "output directory");
    o["emit"] = app->add_option("--emit", f.emit, "enable outputs: trajectory w1 piecewise stokes bounds summary");
    o["no_emit"] = app->add_option("--no-emit", f.no_emit, "disable outputs");
    return o;
}

RunConfig build_config(const Flags& f, const std::map<std::string, CLI::Option*>& o) {
    RunConfig c;
    if (o.at("config")->count()) {
        std::ifstream in(f.config);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ConfigError, "cannot parse " + f.config + ": " + e.what());
        }
        c = config_from_json(doc);
    }
    // Flags go through the same JSON path as the file so both share validation.
    json over = json::object();
    auto num = [&](const char* key, const auto& v) {
        if (o.at(key)->count()) over[key] = v;
    };
    num("alpha", f.alpha);
    num("gamma", f.gamma);
    num("rabi", f.rabi);
    num("t_max", f.t_max);
    num("rel_tol", f.rel_tol);
    num("abs_tol", f.abs_tol);
    num("grid_points", f.grid_points);
    num("seed", f.seed);
    num("terms", f.terms);
    num("method", f.method);
    num("variant", f.variant);
    num("prefactor", f.prefactor);
    num("x0_fit", f.x0_fit);
    num("grid", f.grid);
    num("jobs", f.jobs);
    num("out", f.out);
    json emit = json::object();
    for (const std::string& e : f.emit) emit[e] = true;
    for (const std::string& e : f.no_emit) emit[e] = false;
    if (!emit.empty()) over["emit"] = emit;
    return config_from_json(over, c);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear level-crossing transition probabilities"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    Flags f;
    auto* sim = app.add_subcommand("simulate", "integrate the two-level equations; trajectory CSV + summary");
    auto* apx = app.add_subcommand("approximate", "piecewise special-function approximation of W1");
    auto* sto = app.add_subcommand("stokes", "Stokes constants and the Stokes-route probability");
    auto* cmp = app.add_subcommand("compare", "run every enabled route and compare probabilities");
    auto* swp = app.add_subcommand("sweep", "compare over a list of values of one parameter");

    std::map<CLI::App*, std::map<std::string, CLI::Option*>> opts;
    for (CLI::App* sub : {sim, apx, sto, cmp, swp}) opts[sub] = add_common(sub, f);
    auto* sp = swp->add_option("--parameter", f.sweep_parameter, "alpha | gamma | rabi");
    auto* sv = swp->add_option("--values", f.sweep_values, "sweep values")->expected(1, -1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << error_json(ErrorCode::ConfigError, e.what()).dump() << '\n';
        return exit_code_for(ErrorCode::ConfigError);
    }

    CLI::App* sub = app.get_subcommands().front();
    RunConfig config;
    try {
        config = build_config(f, opts.at(sub));
        if (sub == swp) {
            json sweep = config_to_json(config).at("sweep");
            if (sp->count()) {
                if (sweep.is_null()) sweep = json::object();
                sweep["parameter"] = f.sweep_parameter;
            }
            if (sv->count()) {
                if (sweep.is_null()) sweep = json::object();
                sweep["values"] = f.sweep_values;
            }
            if (!sweep.is_null() && (!sweep.contains("parameter") || !sweep.contains("values")))
                throw Error(ErrorCode::ConfigError, "sweep needs both --parameter and --values");
            config = config_from_json(json{{"sweep", sweep}}, config);
        }
        config.validate();
    } catch (const Error& e) {
        std::cerr << error_json(e.code(), e.what()).dump() << '\n';
        return exit_code_for(e.code());
    }

    if (sub == sim) return cmd_simulate(config, std::cerr);
    if (sub == apx) return cmd_approximate(config, std::cerr);
    if (sub == sto) return cmd_stokes(config, std::cerr);
    if (sub == cmp) return cmd_compare(config, std::cout, std::cerr);
    return cmd_sweep(config, std::cerr);
}
