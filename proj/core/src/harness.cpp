#include "dfls/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace dfls {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json config_echo(const SolverConfig& cfg) {
    ordered_json j;
    j["variant"] = to_string(cfg.variant);
    j["driver"] = to_string(cfg.driver);
    j["c"] = cfg.c;
    j["theta"] = cfg.theta;
    j["gamma"] = cfg.gamma;
    j["delta"] = cfg.delta;
    j["alpha0"] = cfg.alpha0;
    j["max_iterations"] = cfg.stop.max_iterations;
    j["max_evaluations"] = cfg.stop.max_evaluations;
    j["step_tolerance"] = cfg.stop.step_tolerance;
    j["max_step"] = cfg.stop.max_step;
    return j;
}

CountingOracle make_oracle(const TestProblem& p) {
    return CountingOracle(p.objective, p.dim);
}

// Least-squares slope of log(hit) against log(1/eps), over rows with a
// nonzero hitting iteration. Fewer than two usable points: no slope.
std::optional<double> fit_slope(const std::vector<SweepRow>& rows) {
    std::vector<double> xs, ys;
    for (const SweepRow& r : rows) {
        if (r.hitting_iteration < 1) continue;
        xs.push_back(std::log(1.0 / r.epsilon));
        ys.push_back(std::log(static_cast<double>(r.hitting_iteration)));
    }
    if (xs.size() < 2) return std::nullopt;
    const std::size_t m = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

CheckOutcome as_outcome(bool ok) { return ok ? CheckOutcome::Pass : CheckOutcome::Fail; }

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

SolveResult run_solve(const TestProblem& problem, const SolverConfig& config) {
    CountingOracle oracle = make_oracle(problem);
    return solve(problem.x0_default, oracle, config, problem.gradient);
}

void write_trace_csv(std::ostream& out, const TestProblem& problem,
                     const SolverConfig& config, const SolveResult& result) {
    TheoryContext ctx;
    if (problem.lipschitz_L) {
        const double f0 = result.trace.empty() ? 0.0 : result.trace.front().f_x;
        ctx = make_theory_context(problem.dim, *problem.lipschitz_L,
                                  problem.f_min.value_or(0.0), config, f0);
    }
    out << "k,f_x,max_tilde_alpha,phi,success,evals_cum,grad_norm,bound_rhs\n";
    for (const IterationRecord& rec : result.trace) {
        out << rec.k << ',' << format_double(rec.f_x) << ','
            << format_double(rec.max_tilde_alpha) << ',' << format_double(rec.phi) << ','
            << (rec.success ? '1' : '0') << ',' << rec.evals_cum << ',';
        if (rec.grad_norm) out << format_double(*rec.grad_norm);
        out << ',';
        if (problem.lipschitz_valid_at(rec.x_inf_norm))
            out << format_double(gradient_bound_rhs(ctx, rec.max_tilde_alpha, rec.success));
        out << '\n';
    }
}

void write_summary_json(std::ostream& out, const TestProblem& problem,
                        const SolverConfig& config, const SolveResult& result) {
    ordered_json j;
    j["problem"] = problem.name;
    j["config"] = config_echo(config);
    j["status"] = to_string(result.status);
    j["iterations"] = result.iterations;
    j["evaluations"] = result.evaluations;
    j["f_final"] = result.f_final;
    j["x_final"] = result.x_final;
    out << j.dump(2) << '\n';
}

SweepResult run_sweep(const TestProblem& problem, const SolverConfig& config,
                      const std::vector<double>& epsilons) {
    if (!problem.has_gradient())
        throw std::invalid_argument("run_sweep: problem has no analytic gradient");
    if (epsilons.empty()) throw std::invalid_argument("run_sweep: no epsilon values");
    for (double eps : epsilons)
        if (!(eps > 0.0 && eps < 1.0))
            throw std::invalid_argument("run_sweep: epsilon must lie in (0,1)");

    const double eps_min = *std::min_element(epsilons.begin(), epsilons.end());
    const double root_n = std::sqrt(static_cast<double>(problem.dim));

    // Pick a step tolerance that provably drives the recorded gradient norms
    // below eps_min: once max memory <= tol, the previous row satisfies
    // |grad| <= sqrt(n) c1 tol.
    double tol;
    if (problem.lipschitz_L) {
        TheoryContext ctx = make_theory_context(problem.dim, *problem.lipschitz_L,
                                                problem.f_min.value_or(0.0), config, 0.0);
        tol = eps_min / (root_n * c1_constant(ctx));
    } else {
        tol = eps_min * 1e-3;
    }

    SolverConfig run_cfg = config;
    run_cfg.stop.max_iterations = 10'000'000;
    run_cfg.stop.max_evaluations = 100'000'000;

    SolveResult result;
    bool all_found = false;
    for (int attempt = 0; attempt < 4 && !all_found; ++attempt) {
        run_cfg.stop.step_tolerance = tol;
        result = run_solve(problem, run_cfg);
        all_found = !result.trace.empty();
        for (const IterationRecord& rec : result.trace)
            if (!rec.grad_norm) all_found = false;
        if (all_found) {
            double best = *result.trace.front().grad_norm;
            for (const IterationRecord& rec : result.trace)
                best = std::min(best, *rec.grad_norm);
            all_found = best <= eps_min;
        }
        tol /= 100.0;
    }
    if (!all_found)
        throw std::runtime_error("run_sweep: run never reached the smallest epsilon");

    const bool in_box =
        !problem.l_valid_radius ||
        std::all_of(result.trace.begin(), result.trace.end(),
                    [&](const IterationRecord& r) {
                        return r.x_inf_norm <= *problem.l_valid_radius;
                    });
    const bool bounds_available = problem.lipschitz_L && problem.f_min && in_box;
    TheoryContext ctx;
    if (bounds_available) {
        ctx = make_theory_context(problem.dim, *problem.lipschitz_L, *problem.f_min,
                                  config, result.trace.front().f_x);
    }

    SweepResult sweep;
    sweep.problem = problem.name;
    sweep.config = config;
    for (double eps : epsilons) {
        SweepRow row;
        row.epsilon = eps;
        long long hit = -1;
        for (const IterationRecord& rec : result.trace) {
            if (*rec.grad_norm <= eps) {
                hit = rec.k;
                break;
            }
        }
        if (hit < 0)
            throw std::runtime_error("run_sweep: hitting iteration not found");
        row.hitting_iteration = hit;
        row.hitting_evaluations = hit == 0 ? 0 : result.trace[hit - 1].evals_cum;
        if (bounds_available) {
            row.bound_iterations = iteration_bound(ctx, eps);
            row.bound_evaluations =
                feval_bound(ctx, eps, config.variant,
                            result.trace.front().f_x - *problem.f_min);
        }
        sweep.rows.push_back(row);
    }
    sweep.slope_fit = fit_slope(sweep.rows);
    return sweep;
}

void write_sweep_json(std::ostream& out, const SweepResult& sweep) {
    ordered_json j;
    j["problem"] = sweep.problem;
    j["config"] = config_echo(sweep.config);
    j["rows"] = ordered_json::array();
    for (const SweepRow& r : sweep.rows) {
        ordered_json row;
        row["epsilon"] = r.epsilon;
        row["hitting_iteration"] = r.hitting_iteration;
        row["hitting_evaluations"] = r.hitting_evaluations;
        if (r.bound_iterations)
            row["bound_iterations"] = *r.bound_iterations;
        else
            row["bound_iterations"] = nullptr;
        if (r.bound_evaluations)
            row["bound_evaluations"] = *r.bound_evaluations;
        else
            row["bound_evaluations"] = nullptr;
        j["rows"].push_back(row);
    }
    if (sweep.slope_fit)
        j["slope_fit"] = *sweep.slope_fit;
    else
        j["slope_fit"] = nullptr;
    out << j.dump(2) << '\n';
}

std::vector<EnvelopeRow> compute_envelope(const std::function<double(const Vector&)>& f,
                                          const Vector& x, const Vector& d, double abar,
                                          double gamma, double alpha_min, double alpha_max,
                                          double alpha_step) {
    if (x.size() != d.size())
        throw std::invalid_argument("compute_envelope: x and d dimensions differ");
    if (!(alpha_step > 0.0) || alpha_max < alpha_min)
        throw std::invalid_argument("compute_envelope: empty alpha grid");

    const auto point_on_line = [&](double a) {
        Vector p(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i] + a * d[i];
        return p;
    };
    const double f_x = f(x);
    const double f_abar = f(point_on_line(abar));

    const long long count =
        static_cast<long long>(std::floor((alpha_max - alpha_min) / alpha_step + 1e-9)) + 1;
    std::vector<EnvelopeRow> rows;
    rows.reserve(count);
    for (long long j = 0; j < count; ++j) {
        EnvelopeRow row;
        row.alpha = alpha_min + static_cast<double>(j) * alpha_step;
        row.f_along_line = f(point_on_line(row.alpha));
        row.classical_envelope = f_x - gamma * row.alpha * row.alpha;
        const double gap = row.alpha - abar;
        row.new_envelope = f_abar - gamma * gap * gap;
        rows.push_back(row);
    }
    return rows;
}

void write_envelope_csv(std::ostream& out, const std::vector<EnvelopeRow>& rows) {
    out << "alpha,f_along_line,classical_envelope,new_envelope\n";
    for (const EnvelopeRow& r : rows) {
        out << format_double(r.alpha) << ',' << format_double(r.f_along_line) << ','
            << format_double(r.classical_envelope) << ',' << format_double(r.new_envelope)
            << '\n';
    }
}

const char* to_string(CheckOutcome c) {
    switch (c) {
        case CheckOutcome::Pass: return "pass";
        case CheckOutcome::Fail: return "fail";
        case CheckOutcome::Skip: return "skip";
    }
    return "unknown";
}

long long VerifyReport::count(CheckOutcome o) const {
    long long n = 0;
    for (const IterationChecks& c : per_iteration)
        n += (c.gradient_bound == o) + (c.phi_decrease == o) +
             (c.memory_contraction == o) + (c.unsuccessful_evals == o);
    return n;
}

bool VerifyReport::all_passed() const { return count(CheckOutcome::Fail) == 0; }

std::vector<IterationChecks> check_trace(const TheoryContext& ctx,
                                         const SolverConfig& config,
                                         const SolveResult& result,
                                         std::optional<double> l_valid_radius) {
    std::vector<IterationChecks> checks;
    const int n = ctx.n;
    double phi_prev = ctx.phi0;
    double max_prev = config.alpha0;
    long long evals_prev = 1;  // the initial f(x0) evaluation

    for (const IterationRecord& rec : result.trace) {
        IterationChecks c;
        c.k = rec.k;
        const bool partial = rec.partial();
        const bool in_box = !l_valid_radius || rec.x_inf_norm <= *l_valid_radius;
        // A coordinate stopped by the step cap never saw its closing failed
        // test, which the gradient bound's derivation relies on.
        const bool capped =
            std::any_of(rec.outcomes.begin(), rec.outcomes.end(),
                        [](CoordOutcome o) { return o == CoordOutcome::SuccessCapped; });

        if (!partial && !capped && in_box && rec.grad_norm)
            c.gradient_bound = as_outcome(check_gradient_bound_norm(
                ctx, *rec.grad_norm, rec.max_tilde_alpha, rec.success));

        if (!partial)
            c.phi_decrease = as_outcome(
                check_phi_decrease(ctx, rec.phi, phi_prev, rec.max_tilde_alpha, rec.success));

        if (!partial && !rec.success) {
            c.memory_contraction =
                as_outcome(rec.max_tilde_alpha <= ctx.theta * max_prev);
            c.unsuccessful_evals =
                as_outcome(rec.evals_cum - evals_prev == 2LL * n);
        }

        checks.push_back(c);
        phi_prev = rec.phi;
        max_prev = rec.max_tilde_alpha;
        evals_prev = rec.evals_cum;
    }
    return checks;
}

VerifyReport run_verify(const TestProblem& problem, const SolverConfig& config) {
    VerifyReport report;
    report.problem = problem.name;
    report.config = config;

    if (!problem.has_gradient()) {
        report.reason = "problem has no analytic gradient";
        return report;
    }
    if (!problem.lipschitz_L) {
        report.reason = "problem has no Lipschitz constant";
        return report;
    }
    report.verifiable = true;

    const SolveResult result = run_solve(problem, config);
    report.status = result.status;
    report.iterations = result.iterations;
    if (result.trace.empty()) return report;

    const TheoryContext ctx =
        make_theory_context(problem.dim, *problem.lipschitz_L,
                            problem.f_min.value_or(0.0), config, result.trace.front().f_x);
    report.per_iteration = check_trace(ctx, config, result, problem.l_valid_radius);
    return report;
}

void write_verify_json(std::ostream& out, const VerifyReport& report) {
    ordered_json j;
    j["problem"] = report.problem;
    j["config"] = config_echo(report.config);
    j["verifiable"] = report.verifiable;
    if (!report.verifiable) {
        j["reason"] = report.reason;
        out << j.dump(2) << '\n';
        return;
    }
    j["status"] = to_string(report.status);
    j["iterations"] = report.iterations;
    ordered_json counts;
    for (CheckOutcome o : {CheckOutcome::Pass, CheckOutcome::Fail, CheckOutcome::Skip})
        counts[to_string(o)] = report.count(o);
    j["counts"] = counts;
    j["per_iteration"] = ordered_json::array();
    for (const IterationChecks& c : report.per_iteration) {
        ordered_json row;
        row["k"] = c.k;
        row["gradient_bound"] = to_string(c.gradient_bound);
        row["phi_decrease"] = to_string(c.phi_decrease);
        row["memory_contraction"] = to_string(c.memory_contraction);
        row["unsuccessful_evals"] = to_string(c.unsuccessful_evals);
        j["per_iteration"].push_back(row);
    }
    j["all_passed"] = report.all_passed();
    out << j.dump(2) << '\n';
}

std::string config_to_json(const SolverConfig& config) {
    return config_echo(config).dump(2);
}

namespace {

void parse_config_fields(const nlohmann::json& j, SolverConfig& cfg) {
    for (const auto& [key, value] : j.items()) {
        if (key == "variant") {
            const auto v = variant_from_string(value.get<std::string>());
            if (!v) throw std::invalid_argument("config: unknown variant");
            cfg.variant = *v;
        } else if (key == "driver") {
            const auto d = driver_from_string(value.get<std::string>());
            if (!d) throw std::invalid_argument("config: unknown driver");
            cfg.driver = *d;
        } else if (key == "c") {
            cfg.c = value.get<double>();
        } else if (key == "theta") {
            cfg.theta = value.get<double>();
        } else if (key == "gamma") {
            cfg.gamma = value.get<double>();
        } else if (key == "delta") {
            cfg.delta = value.get<double>();
        } else if (key == "alpha0") {
            cfg.alpha0 = value.get<double>();
        } else if (key == "max_iterations") {
            cfg.stop.max_iterations = value.get<long long>();
        } else if (key == "max_evaluations") {
            cfg.stop.max_evaluations = value.get<long long>();
        } else if (key == "step_tolerance") {
            cfg.stop.step_tolerance = value.get<double>();
        } else if (key == "max_step") {
            cfg.stop.max_step = value.get<double>();
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
}

}  // namespace

SolverConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config JSON must be an object");
    SolverConfig cfg;
    try {
        parse_config_fields(j, cfg);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config JSON: ") + e.what());
    }
    return cfg;
}

}  // namespace dfls
