#include "dfls/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dfls/theory.hpp"

namespace dfls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void finish_record(IterationRecord& rec, double f_next, const StepMemory& mem,
                   const CountingOracle& oracle, const SolverConfig& cfg) {
    rec.success = !rec.successful_coords.empty();
    rec.max_tilde_alpha = mem.max_tilde_alpha();
    rec.phi = lyapunov_phi(f_next, mem, cfg.gamma, cfg.c);
    rec.evals_cum = oracle.eval_count();
}

bool budget_exhausted(const CountingOracle& oracle, const SolverConfig& cfg) {
    return oracle.eval_count() >= cfg.stop.max_evaluations;
}

}  // namespace

double tentative_step(double own_memory, double memory_max, double c) {
    return std::max(own_memory, c * memory_max);
}

double tentative_step(const StepMemory& mem, int i, double c) {
    return tentative_step(mem.tilde_alpha[i], mem.max_tilde_alpha(), c);
}

void update_memory(StepMemory& mem, int i, double abar, const LinesearchResult& result,
                   double theta) {
    if (result.alpha > 0.0) {
        mem.tilde_alpha[i] = result.alpha;
        mem.sign[i] = result.sign_out;
    } else {
        // Clamp so the entry stays strictly positive even if theta*abar
        // underflows after very long failure streaks.
        mem.tilde_alpha[i] =
            std::max(theta * abar, std::numeric_limits<double>::denorm_min());
    }
}

IterationRecord iterate_chained(Vector& x, double& f_x, StepMemory& mem,
                                CountingOracle& oracle, const SolverConfig& cfg,
                                long long k) {
    const int n = mem.dimension();
    IterationRecord rec;
    rec.k = k;
    rec.f_x = f_x;
    rec.x_inf_norm = norm_inf(x);
    rec.expansions.assign(n, 0);
    rec.outcomes.assign(n, CoordOutcome::NotAttempted);

    const double snap_max = mem.max_tilde_alpha();
    double f_y = f_x;  // value at the current chain point, reused across failed coordinates

    for (int i = 0; i < n; ++i) {
        if (budget_exhausted(oracle, cfg)) break;
        const double abar = tentative_step(mem.tilde_alpha[i], snap_max, cfg.c);
        const LinesearchResult r =
            df_linesearch(cfg.variant, oracle, x, f_y, i, mem.sign[i], abar,
                          cfg.gamma, cfg.delta, cfg.stop.max_step);
        update_memory(mem, i, abar, r, cfg.theta);
        if (r.alpha > 0.0) {
            x[i] = x[i] + r.alpha * r.sign_out;
            f_y = r.f_end;
            rec.successful_coords.push_back(i);
            rec.expansions[i] = r.expansions;
            rec.outcomes[i] = r.safety_stopped ? CoordOutcome::SuccessCapped
                                               : CoordOutcome::Success;
        } else {
            rec.outcomes[i] = CoordOutcome::Failure;
        }
    }

    f_x = f_y;
    if (std::isfinite(f_x)) oracle.set_incumbent(x, f_x);
    finish_record(rec, f_x, mem, oracle, cfg);
    return rec;
}

IterationRecord iterate_modified(Vector& x, double& f_x, StepMemory& mem,
                                 CountingOracle& oracle, const SolverConfig& cfg,
                                 long long k) {
    const int n = mem.dimension();
    IterationRecord rec;
    rec.k = k;
    rec.f_x = f_x;
    rec.x_inf_norm = norm_inf(x);
    rec.expansions.assign(n, 0);
    rec.outcomes.assign(n, CoordOutcome::NotAttempted);

    const double snap_max = mem.max_tilde_alpha();
    const double f_start = f_x;

    std::vector<double> cand_alpha(n, 0.0), cand_sign(n, 1.0), cand_f(n, f_start);

    for (int i = 0; i < n; ++i) {
        if (budget_exhausted(oracle, cfg)) break;
        const double abar = tentative_step(mem.tilde_alpha[i], snap_max, cfg.c);
        const LinesearchResult r =
            df_linesearch(cfg.variant, oracle, x, f_start, i, mem.sign[i], abar,
                          cfg.gamma, cfg.delta, cfg.stop.max_step);
        update_memory(mem, i, abar, r, cfg.theta);
        if (r.alpha > 0.0) {
            cand_alpha[i] = r.alpha;
            cand_sign[i] = r.sign_out;
            cand_f[i] = r.f_end;
            rec.successful_coords.push_back(i);
            rec.expansions[i] = r.expansions;
            rec.outcomes[i] = r.safety_stopped ? CoordOutcome::SuccessCapped
                                               : CoordOutcome::Success;
        } else {
            rec.outcomes[i] = CoordOutcome::Failure;
        }
    }

    // Candidates with alpha = 0 coincide with x_k; argmin with strict
    // comparison keeps the smallest index on ties.
    int best = 0;
    for (int i = 1; i < n; ++i)
        if (cand_f[i] < cand_f[best]) best = i;

    if (cand_alpha[best] > 0.0) {
        x[best] = x[best] + cand_alpha[best] * cand_sign[best];
        f_x = cand_f[best];
    }
    if (std::isfinite(f_x)) oracle.set_incumbent(x, f_x);
    finish_record(rec, f_x, mem, oracle, cfg);
    return rec;
}

SolveResult solve(const Vector& x0, CountingOracle& oracle, const SolverConfig& cfg,
                  const std::function<Vector(const Vector&)>& gradient) {
    cfg.validate();
    if (x0.empty() || static_cast<int>(x0.size()) != oracle.dimension())
        throw std::invalid_argument("solve: x0 dimension must match the oracle");
    for (double v : x0)
        if (!std::isfinite(v)) throw std::invalid_argument("solve: x0 must be finite");

    const int n = static_cast<int>(x0.size());
    SolveResult res;
    res.x_final = x0;
    res.f_final = kNaN;

    if (budget_exhausted(oracle, cfg)) {
        res.status = SolveStatus::EvaluationBudget;
        res.evaluations = oracle.eval_count();
        return res;
    }

    Vector x = x0;
    const auto f0 = oracle.evaluate(x0);
    double f_x = f0 ? *f0 : kNaN;
    StepMemory mem(n, cfg.alpha0);

    SolveStatus status;
    long long k = 0;
    for (;;) {
        if (cfg.stop.step_tolerance > 0.0 &&
            mem.max_tilde_alpha() <= cfg.stop.step_tolerance) {
            status = SolveStatus::StepToleranceReached;
            break;
        }
        if (k >= cfg.stop.max_iterations) {
            status = SolveStatus::IterationBudget;
            break;
        }
        if (budget_exhausted(oracle, cfg)) {
            status = SolveStatus::EvaluationBudget;
            break;
        }

        std::optional<double> grad_norm;
        if (gradient) grad_norm = norm2(gradient(x));

        IterationRecord rec = cfg.driver == DriverMode::Chained
                                  ? iterate_chained(x, f_x, mem, oracle, cfg, k)
                                  : iterate_modified(x, f_x, mem, oracle, cfg, k);
        rec.grad_norm = grad_norm;
        res.trace.push_back(std::move(rec));
        ++k;

        const IterationRecord& last = res.trace.back();
        if (last.partial()) {
            status = SolveStatus::EvaluationBudget;
            break;
        }
        if (std::all_of(last.outcomes.begin(), last.outcomes.end(),
                        [](CoordOutcome o) { return o == CoordOutcome::SuccessCapped; })) {
            status = SolveStatus::SafetyStopped;
            break;
        }
    }

    res.x_final = x;
    res.f_final = f_x;
    res.iterations = k;
    res.evaluations = oracle.eval_count();
    res.status = status;
    return res;
}

}  // namespace dfls
