#pragma once

#include "dfls/core.hpp"
#include "dfls/linesearch.hpp"

namespace dfls {

struct SolveResult {
    Vector x_final;
    double f_final = 0.0;  ///< objective at x_final as last evaluated (never recomputed)
    long long iterations = 0;
    long long evaluations = 0;
    SolveStatus status = SolveStatus::IterationBudget;
    std::vector<IterationRecord> trace;  ///< one record per iteration
};

/// Tentative step for coordinate i: max of the coordinate's own memory and
/// c times the largest memory entry.
double tentative_step(const StepMemory& mem, int i, double c);
double tentative_step(double own_memory, double memory_max, double c);

/// Write a linesearch outcome back into the memory: on failure the
/// coordinate's step contracts to theta*abar (clamped away from zero to
/// keep the positivity invariant), on success it becomes the accepted step
/// and the accepted sign is stored.
void update_memory(StepMemory& mem, int i, double abar, const LinesearchResult& result,
                   double theta);

/// One outer iteration where each coordinate's linesearch starts from the
/// previous coordinate's end point. x and f_x advance to the new iterate;
/// mem is updated coordinate by coordinate. Tentative steps are formed from
/// the memory as it stood on entry to the iteration, so the coupling term
/// c*max is a whole-iteration snapshot. Coordinates are skipped (marked
/// NotAttempted) once the evaluation budget is exhausted.
IterationRecord iterate_chained(Vector& x, double& f_x, StepMemory& mem,
                                CountingOracle& oracle, const SolverConfig& config,
                                long long k = 0);

/// One outer iteration where every coordinate's linesearch starts from x_k
/// and the best candidate end point (smallest coordinate index on ties)
/// becomes the new iterate. Its objective value is reused from the
/// linesearch, never re-evaluated.
IterationRecord iterate_modified(Vector& x, double& f_x, StepMemory& mem,
                                 CountingOracle& oracle, const SolverConfig& config,
                                 long long k = 0);

/// Run the configured driver from x0 until a stopping rule fires.
/// Deterministic: identical inputs produce identical traces and counts.
/// When a gradient is supplied it is evaluated once per iteration at the
/// iteration's start point, outside the oracle's accounting, and recorded
/// in the trace; the solver itself never consults it.
SolveResult solve(const Vector& x0, CountingOracle& oracle, const SolverConfig& config,
                  const std::function<Vector(const Vector&)>& gradient = {});

}  // namespace dfls
