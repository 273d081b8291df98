#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dfls {

/// A point in R^n. Length is fixed per solver instance.
using Vector = std::vector<double>;

/// Which sufficient-decrease rule the extrapolation loop uses.
enum class LinesearchVariant {
    Standard,  ///< decrease measured against the linesearch start point
    New        ///< decrease measured between consecutive accepted points
};

/// Outer-iteration scheme.
enum class DriverMode {
    Chained,  ///< each coordinate starts from the previous coordinate's end point
    Modified  ///< each coordinate starts from x_k; the best candidate becomes x_{k+1}
};

enum class SolveStatus {
    StepToleranceReached,
    IterationBudget,
    EvaluationBudget,
    SafetyStopped  ///< every coordinate hit the extrapolation cap in one iteration
};

const char* to_string(SolveStatus s);
const char* to_string(LinesearchVariant v);
const char* to_string(DriverMode d);

std::optional<LinesearchVariant> variant_from_string(const std::string& s);
std::optional<DriverMode> driver_from_string(const std::string& s);

/// Termination rules. A budget of zero binds immediately; step_tolerance = 0
/// never fires (step memories stay strictly positive). At least one of the
/// three must be nonzero.
struct StoppingRule {
    long long max_iterations = 1'000'000;
    long long max_evaluations = 10'000'000;
    double step_tolerance = 1e-8;  ///< stop when max_i step memory <= this
    double max_step = 1e10;        ///< safety cap on extrapolated steps
};

/// Solver parameters. Ranges: 0 < c < 1, 0 < theta < 1, gamma > 0,
/// 0 < delta < 1, alpha0 > 0.
struct SolverConfig {
    double c = 0.5;       ///< coupling between a coordinate's memory and the largest memory
    double theta = 0.5;   ///< step-memory contraction on a failed coordinate
    double gamma = 1e-6;  ///< sufficient-decrease coefficient
    double delta = 0.5;   ///< extrapolation shrink factor (each expansion multiplies by 1/delta)
    LinesearchVariant variant = LinesearchVariant::Standard;
    DriverMode driver = DriverMode::Chained;
    double alpha0 = 1.0;  ///< uniform initial step memory
    StoppingRule stop;

    /// Throws std::invalid_argument on any out-of-range parameter or an
    /// all-zero stopping rule.
    void validate() const;
};

/// Black-box objective wrapper with exact evaluation accounting.
///
/// Every underlying objective call increments the counter by exactly one.
/// The last finite evaluation is memoized; re-evaluating the same point
/// (bitwise-equal coordinates) returns the cached value without a call.
/// Non-finite objective values are surfaced as std::nullopt, never as values.
class CountingOracle {
public:
    using Objective = std::function<double(const Vector&)>;

    CountingOracle(Objective objective, int dimension)
        : objective_(std::move(objective)), dimension_(dimension) {}

    /// f(x), or nullopt when the objective produced NaN/inf at x.
    /// Throws std::invalid_argument on dimension mismatch.
    std::optional<double> evaluate(const Vector& x);

    /// Pin (x, f) as the incumbent so a repeated evaluation is free.
    void set_incumbent(const Vector& x, double f);

    long long eval_count() const { return eval_count_; }
    int dimension() const { return dimension_; }

private:
    Objective objective_;
    int dimension_;
    long long eval_count_ = 0;
    std::optional<std::pair<Vector, double>> cache_;
};

/// Per-coordinate linesearch state carried across iterations: the tentative
/// step sizes (always strictly positive) and the last accepted direction
/// sign (+1 or -1) for each coordinate.
struct StepMemory {
    std::vector<double> tilde_alpha;
    std::vector<double> sign;

    StepMemory() = default;
    StepMemory(int n, double alpha0) : tilde_alpha(n, alpha0), sign(n, 1.0) {}

    int dimension() const { return static_cast<int>(tilde_alpha.size()); }
    double max_tilde_alpha() const;
    bool uniform() const;  ///< all step entries bitwise equal
};

enum class CoordOutcome : std::uint8_t {
    Failure,        ///< both probe directions rejected; memory contracted
    Success,        ///< accepted step, extrapolation ended on a failing test
    SuccessCapped,  ///< accepted step, extrapolation ended at the safety cap
    NotAttempted    ///< evaluation budget ran out before this coordinate
};

inline bool is_success(CoordOutcome o) {
    return o == CoordOutcome::Success || o == CoordOutcome::SuccessCapped;
}

/// One trace row, written at the end of an outer iteration. f_x and
/// grad_norm describe the iterate the iteration started from; the step
/// memory and merit value are taken after the iteration's update, which is
/// the pairing the runtime gradient-bound check needs.
struct IterationRecord {
    long long k = 0;
    double f_x = 0;             ///< objective at the iteration's start point
    double max_tilde_alpha = 0; ///< max step memory after the update
    double phi = 0;             ///< merit value after the update
    bool success = false;       ///< some coordinate accepted a step
    std::vector<int> successful_coords;
    std::vector<int> expansions;          ///< per-coordinate accepted expansion count
    std::vector<CoordOutcome> outcomes;   ///< per-coordinate result
    long long evals_cum = 0;              ///< oracle count after this iteration
    std::optional<double> grad_norm;      ///< |grad f| at the start point, if a gradient was supplied
    double x_inf_norm = 0;                ///< max-norm of the start point

    /// True when the evaluation budget cut the iteration short.
    bool partial() const;
};

double norm2(const Vector& v);
double norm_inf(const Vector& v);

}  // namespace dfls
