#include "dfls/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfls {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::StepToleranceReached: return "StepToleranceReached";
        case SolveStatus::IterationBudget: return "IterationBudget";
        case SolveStatus::EvaluationBudget: return "EvaluationBudget";
        case SolveStatus::SafetyStopped: return "SafetyStopped";
    }
    return "Unknown";
}

const char* to_string(LinesearchVariant v) {
    return v == LinesearchVariant::Standard ? "standard" : "new";
}

const char* to_string(DriverMode d) {
    return d == DriverMode::Chained ? "chained" : "modified";
}

std::optional<LinesearchVariant> variant_from_string(const std::string& s) {
    if (s == "standard") return LinesearchVariant::Standard;
    if (s == "new") return LinesearchVariant::New;
    return std::nullopt;
}

std::optional<DriverMode> driver_from_string(const std::string& s) {
    if (s == "chained") return DriverMode::Chained;
    if (s == "modified") return DriverMode::Modified;
    return std::nullopt;
}

void SolverConfig::validate() const {
    auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
    if (!(c > 0.0 && c < 1.0)) fail("SolverConfig: c must be in (0,1)");
    if (!(theta > 0.0 && theta < 1.0)) fail("SolverConfig: theta must be in (0,1)");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) fail("SolverConfig: gamma must be positive");
    if (!(delta > 0.0 && delta < 1.0)) fail("SolverConfig: delta must be in (0,1)");
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) fail("SolverConfig: alpha0 must be positive");
    if (!(stop.max_step > 0.0)) fail("SolverConfig: max_step must be positive");
    if (stop.max_iterations < 0 || stop.max_evaluations < 0 || stop.step_tolerance < 0)
        fail("SolverConfig: stopping thresholds must be nonnegative");
    if (stop.max_iterations == 0 && stop.max_evaluations == 0 && stop.step_tolerance == 0.0)
        fail("SolverConfig: at least one stopping rule must be active");
}

std::optional<double> CountingOracle::evaluate(const Vector& x) {
    if (static_cast<int>(x.size()) != dimension_)
        throw std::invalid_argument("CountingOracle: dimension mismatch");
    if (cache_ && cache_->first == x) return cache_->second;
    ++eval_count_;
    const double f = objective_(x);
    if (!std::isfinite(f)) return std::nullopt;
    cache_.emplace(x, f);
    return f;
}

void CountingOracle::set_incumbent(const Vector& x, double f) {
    cache_.emplace(x, f);
}

double StepMemory::max_tilde_alpha() const {
    double m = 0.0;
    for (double a : tilde_alpha) m = std::max(m, a);
    return m;
}

bool StepMemory::uniform() const {
    for (double a : tilde_alpha)
        if (a != tilde_alpha.front()) return false;
    return true;
}

bool IterationRecord::partial() const {
    return std::any_of(outcomes.begin(), outcomes.end(),
                       [](CoordOutcome o) { return o == CoordOutcome::NotAttempted; });
}

double norm2(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm_inf(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace dfls
