#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dfls/driver.hpp"
#include "dfls/problems.hpp"
#include "dfls/theory.hpp"

namespace dfls {

/// Shortest decimal string that round-trips the value (plain "nan"/"inf"
/// for non-finite input). Used everywhere a number is persisted so output
/// files are byte-stable.
std::string format_double(double v);

/// Run the configured solver on a built-in problem. When the problem has an
/// analytic gradient its norm is recorded in the trace (outside the
/// oracle's accounting).
SolveResult run_solve(const TestProblem& problem, const SolverConfig& config);

/// Trace CSV, columns: k,f_x,max_tilde_alpha,phi,success,evals_cum,grad_norm,bound_rhs.
/// grad_norm is empty when no gradient was recorded; bound_rhs is empty
/// when the problem has no (applicable) Lipschitz constant.
void write_trace_csv(std::ostream& out, const TestProblem& problem,
                     const SolverConfig& config, const SolveResult& result);

/// JSON summary: {problem, config, status, iterations, evaluations, f_final, x_final}.
void write_summary_json(std::ostream& out, const TestProblem& problem,
                        const SolverConfig& config, const SolveResult& result);

struct SweepRow {
    double epsilon = 0.0;
    long long hitting_iteration = 0;    ///< first k with |grad f(x_k)| <= epsilon
    long long hitting_evaluations = 0;  ///< oracle calls spent producing that iterate
    std::optional<std::uint64_t> bound_iterations;
    std::optional<std::uint64_t> bound_evaluations;
};

struct SweepResult {
    std::string problem;
    SolverConfig config;
    std::vector<SweepRow> rows;        ///< in the caller's epsilon order
    std::optional<double> slope_fit;   ///< log(hitting_iteration) vs log(1/eps) slope
};

/// One instrumented solve, then hitting iterations and theory bounds per
/// epsilon. The run's stopping rules are replaced so the trace provably
/// reaches the smallest epsilon. Requires an analytic gradient; every
/// epsilon must lie in (0,1).
SweepResult run_sweep(const TestProblem& problem, const SolverConfig& config,
                      const std::vector<double>& epsilons);

void write_sweep_json(std::ostream& out, const SweepResult& sweep);

struct EnvelopeRow {
    double alpha = 0.0;
    double f_along_line = 0.0;        ///< f(x + alpha d)
    double classical_envelope = 0.0;  ///< f(x) - gamma alpha^2
    double new_envelope = 0.0;        ///< f(x + abar d) - gamma (alpha - abar)^2
};

/// Sample the objective along x + alpha d together with both
/// sufficient-decrease envelopes, for alpha = alpha_min, alpha_min + step, ...
/// up to alpha_max.
std::vector<EnvelopeRow> compute_envelope(const std::function<double(const Vector&)>& f,
                                          const Vector& x, const Vector& d, double abar,
                                          double gamma, double alpha_min, double alpha_max,
                                          double alpha_step);

/// CSV columns: alpha,f_along_line,classical_envelope,new_envelope.
void write_envelope_csv(std::ostream& out, const std::vector<EnvelopeRow>& rows);

enum class CheckOutcome : std::uint8_t { Pass, Fail, Skip };
const char* to_string(CheckOutcome c);

/// Pass/fail/skip per runtime invariant for one iteration.
struct IterationChecks {
    long long k = 0;
    CheckOutcome gradient_bound = CheckOutcome::Skip;
    CheckOutcome phi_decrease = CheckOutcome::Skip;
    CheckOutcome memory_contraction = CheckOutcome::Skip;
    CheckOutcome unsuccessful_evals = CheckOutcome::Skip;
};

struct VerifyReport {
    std::string problem;
    SolverConfig config;
    bool verifiable = false;
    std::string reason;  ///< populated when !verifiable
    SolveStatus status = SolveStatus::IterationBudget;
    long long iterations = 0;
    std::vector<IterationChecks> per_iteration;

    long long count(CheckOutcome o) const;
    bool all_passed() const;  ///< no Fail anywhere (Skips allowed)
};

/// Solve, then check every iteration against the runtime invariants:
/// the gradient bound, the merit decrease, the failure-iteration memory
/// contraction, and the 2n evaluation count of unsuccessful iterations.
/// A problem without gradient or Lipschitz constant yields an
/// "unverifiable" report, which is distinct from a check failure.
VerifyReport run_verify(const TestProblem& problem, const SolverConfig& config);

/// Verification of an existing instrumented result against an explicit
/// context (exposed so a mismatched context can be shown to trip the checks).
std::vector<IterationChecks> check_trace(const TheoryContext& ctx,
                                         const SolverConfig& config,
                                         const SolveResult& result,
                                         std::optional<double> l_valid_radius);

void write_verify_json(std::ostream& out, const VerifyReport& report);

/// Flat JSON object for a SolverConfig (the schema --config files use).
std::string config_to_json(const SolverConfig& config);

/// Parse the same flat schema; unknown keys are rejected.
SolverConfig config_from_json(const std::string& text);

}  // namespace dfls
