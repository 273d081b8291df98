// dfls: command-line front end for the coordinate-linesearch solver.
//
// Subcommands: solve, sweep, envelope, verify. Exit codes: 0 on success
// (and when all verification checks pass), 1 when a verification check
// fails, 2 on usage errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dfls/harness.hpp"

namespace {

using namespace dfls;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigFlags {
    std::string config_path;
    std::string variant;
    std::string driver;
    double c = 0.0, theta = 0.0, gamma = 0.0, delta = 0.0, alpha0 = 0.0;
    long long max_iters = 0, max_evals = 0;
    double step_tol = 0.0, max_step = 0.0;

    CLI::Option* opt_variant = nullptr;
    CLI::Option* opt_driver = nullptr;
    CLI::Option* opt_c = nullptr;
    CLI::Option* opt_theta = nullptr;
    CLI::Option* opt_gamma = nullptr;
    CLI::Option* opt_delta = nullptr;
    CLI::Option* opt_alpha0 = nullptr;
    CLI::Option* opt_max_iters = nullptr;
    CLI::Option* opt_max_evals = nullptr;
    CLI::Option* opt_step_tol = nullptr;
    CLI::Option* opt_max_step = nullptr;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--config", f.config_path,
                    "JSON file with solver parameters (flags override it)");
    f.opt_variant =
        cmd->add_option("--variant", f.variant, "Linesearch variant: standard|new");
    f.opt_driver =
        cmd->add_option("--driver", f.driver, "Iteration driver: chained|modified");
    f.opt_c = cmd->add_option("--c", f.c, "Coupling constant in (0,1)");
    f.opt_theta = cmd->add_option("--theta", f.theta, "Failure contraction in (0,1)");
    f.opt_gamma = cmd->add_option("--gamma", f.gamma, "Sufficient-decrease coefficient");
    f.opt_delta = cmd->add_option("--delta", f.delta, "Extrapolation shrink in (0,1)");
    f.opt_alpha0 = cmd->add_option("--alpha0", f.alpha0, "Initial step memory");
    f.opt_max_iters = cmd->add_option("--max-iters", f.max_iters, "Iteration budget");
    f.opt_max_evals = cmd->add_option("--max-evals", f.max_evals, "Evaluation budget");
    f.opt_step_tol = cmd->add_option("--step-tol", f.step_tol,
                                     "Stop when the largest step memory falls below this");
    f.opt_max_step = cmd->add_option("--max-step", f.max_step,
                                     "Safety cap on extrapolated steps");
}

SolverConfig build_config(const ConfigFlags& f) {
    SolverConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in.good()) throw UsageError("cannot read config file: " + f.config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        cfg = config_from_json(ss.str());
    }
    if (f.opt_variant->count()) {
        const auto v = variant_from_string(f.variant);
        if (!v) throw UsageError("unknown variant: " + f.variant);
        cfg.variant = *v;
    }
    if (f.opt_driver->count()) {
        const auto d = driver_from_string(f.driver);
        if (!d) throw UsageError("unknown driver: " + f.driver);
        cfg.driver = *d;
    }
    if (f.opt_c->count()) cfg.c = f.c;
    if (f.opt_theta->count()) cfg.theta = f.theta;
    if (f.opt_gamma->count()) cfg.gamma = f.gamma;
    if (f.opt_delta->count()) cfg.delta = f.delta;
    if (f.opt_alpha0->count()) cfg.alpha0 = f.alpha0;
    if (f.opt_max_iters->count()) cfg.stop.max_iterations = f.max_iters;
    if (f.opt_max_evals->count()) cfg.stop.max_evaluations = f.max_evals;
    if (f.opt_step_tol->count()) cfg.stop.step_tolerance = f.step_tol;
    if (f.opt_max_step->count()) cfg.stop.max_step = f.max_step;
    cfg.validate();
    return cfg;
}

const TestProblem& require_problem(const std::string& name) {
    const TestProblem* p = find_problem(name);
    if (!p) {
        std::string names;
        for (const auto& n : problem_names()) names += " " + n;
        throw UsageError("unknown problem '" + name + "'; available:" + names);
    }
    return *p;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw UsageError("cannot write to " + path);
    return out;
}

std::string sibling_json_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ".json";
    return path.substr(0, dot) + ".json";
}

int cmd_solve(const std::string& problem_name, const ConfigFlags& flags,
              const std::string& out_path) {
    const TestProblem& problem = require_problem(problem_name);
    const SolverConfig cfg = build_config(flags);
    const SolveResult result = run_solve(problem, cfg);

    if (out_path.empty()) {
        write_summary_json(std::cout, problem, cfg, result);
    } else {
        auto csv = open_output(out_path);
        write_trace_csv(csv, problem, cfg, result);
        auto json = open_output(sibling_json_path(out_path));
        write_summary_json(json, problem, cfg, result);
        std::cout << "status=" << to_string(result.status)
                  << " iterations=" << result.iterations
                  << " evaluations=" << result.evaluations
                  << " f_final=" << format_double(result.f_final) << '\n';
    }
    return 0;
}

int cmd_sweep(const std::string& problem_name, const ConfigFlags& flags,
              const std::vector<double>& epsilons, const std::string& out_path) {
    const TestProblem& problem = require_problem(problem_name);
    const SolverConfig cfg = build_config(flags);
    const SweepResult sweep = run_sweep(problem, cfg, epsilons);
    if (out_path.empty()) {
        write_sweep_json(std::cout, sweep);
    } else {
        auto json = open_output(out_path);
        write_sweep_json(json, sweep);
        std::cout << "rows=" << sweep.rows.size() << " slope_fit="
                  << (sweep.slope_fit ? format_double(*sweep.slope_fit) : "null")
                  << '\n';
    }
    return 0;
}

int cmd_envelope(const std::string& problem_name, const Vector& x, const Vector& d,
                 double abar, double gamma, double alpha_min, double alpha_max,
                 double alpha_step, const std::string& out_path) {
    const TestProblem& problem = require_problem(problem_name);
    if (static_cast<int>(x.size()) != problem.dim)
        throw UsageError("--x must have the problem dimension");
    const auto rows =
        compute_envelope(problem.objective, x, d, abar, gamma, alpha_min, alpha_max,
                         alpha_step);
    if (out_path.empty()) {
        write_envelope_csv(std::cout, rows);
    } else {
        auto csv = open_output(out_path);
        write_envelope_csv(csv, rows);
        std::cout << "rows=" << rows.size() << '\n';
    }
    return 0;
}

int cmd_verify(const std::string& problem_name, const ConfigFlags& flags,
               const std::string& out_path) {
    const TestProblem& problem = require_problem(problem_name);
    const SolverConfig cfg = build_config(flags);
    const VerifyReport report = run_verify(problem, cfg);

    if (out_path.empty()) {
        write_verify_json(std::cout, report);
    } else {
        auto json = open_output(out_path);
        write_verify_json(json, report);
    }
    if (!report.verifiable) {
        std::cout << "unverifiable: " << report.reason << '\n';
        return 0;
    }
    std::cout << "iterations=" << report.iterations
              << " pass=" << report.count(CheckOutcome::Pass)
              << " fail=" << report.count(CheckOutcome::Fail)
              << " skip=" << report.count(CheckOutcome::Skip) << '\n';
    return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Derivative-free coordinate-linesearch solver toolkit"};
    app.require_subcommand(1);

    std::string problem_name, out_path;

    auto* solve_cmd =
        app.add_subcommand("solve", "Run a solve; persist trace CSV and summary JSON");
    ConfigFlags solve_flags;
    solve_cmd->add_option("--problem", problem_name, "Built-in problem name")->required();
    add_config_flags(solve_cmd, solve_flags);
    solve_cmd->add_option("--out", out_path,
                          "Trace CSV path (summary JSON written next to it)");

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Gradient-threshold sweep with hitting times and theory bounds");
    ConfigFlags sweep_flags;
    std::vector<double> epsilons;
    sweep_cmd->add_option("--problem", problem_name, "Built-in problem name")->required();
    sweep_cmd->add_option("--eps", epsilons, "Gradient threshold, repeatable")
        ->required();
    add_config_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--out", out_path, "Sweep JSON path");

    auto* env_cmd = app.add_subcommand(
        "envelope", "Export objective values along a line with both decrease envelopes");
    Vector env_x, env_d;
    double env_abar = 0.0, env_gamma = 1e-6;
    double alpha_min = 0.0, alpha_max = 0.0, alpha_step = 0.0;
    env_cmd->add_option("--problem", problem_name, "Built-in problem name")->required();
    env_cmd->add_option("--x", env_x, "Base point, comma separated")
        ->required()
        ->delimiter(',');
    env_cmd->add_option("--d", env_d, "Direction, comma separated")
        ->required()
        ->delimiter(',');
    env_cmd->add_option("--abar", env_abar, "Reference step of the probe")->required();
    env_cmd->add_option("--gamma", env_gamma, "Sufficient-decrease coefficient");
    env_cmd->add_option("--alpha-min", alpha_min, "Grid start (default 0)");
    env_cmd->add_option("--alpha-max", alpha_max, "Grid end")->required();
    env_cmd->add_option("--alpha-step", alpha_step, "Grid step")->required();
    env_cmd->add_option("--out", out_path, "Envelope CSV path");

    auto* verify_cmd = app.add_subcommand(
        "verify", "Run a solve and check the per-iteration bound invariants");
    ConfigFlags verify_flags;
    verify_cmd->add_option("--problem", problem_name, "Built-in problem name")
        ->required();
    add_config_flags(verify_cmd, verify_flags);
    verify_cmd->add_option("--out", out_path, "Report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(problem_name, solve_flags, out_path);
        if (sweep_cmd->parsed())
            return cmd_sweep(problem_name, sweep_flags, epsilons, out_path);
        if (env_cmd->parsed())
            return cmd_envelope(problem_name, env_x, env_d, env_abar, env_gamma,
                                alpha_min, alpha_max, alpha_step, out_path);
        if (verify_cmd->parsed()) return cmd_verify(problem_name, verify_flags, out_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
