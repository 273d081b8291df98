#include "dfls/linesearch.hpp"

#include <cmath>
#include <limits>

namespace dfls {

namespace {

// Accept iff the trial produced a finite value below the threshold. A NaN
// threshold (non-finite reference value) rejects everything.
bool accepted(const std::optional<double>& v, double threshold) {
    return v.has_value() && *v <= threshold;
}

enum class LoopRule { AgainstStart, AgainstLast };

LinesearchResult extrapolate(LoopRule rule, CountingOracle& oracle, const Vector& y,
                             double f_y, int i, double sign, double abar, double f_probe,
                             double gamma, double delta, double max_step) {
    LinesearchResult r;
    r.alpha = abar;
    r.sign_out = sign;
    r.f_end = f_probe;

    Vector trial = y;
    double f_last = f_probe;
    const double expand_gap = 1.0 / delta - 1.0;  // distance factor between consecutive points

    for (;;) {
        const double next = r.alpha / delta;
        if (next > max_step) {
            r.safety_stopped = true;
            break;
        }
        trial[i] = y[i] + next * sign;
        const auto v = oracle.evaluate(trial);
        ++r.evals_used;
        double threshold;
        if (rule == LoopRule::AgainstStart) {
            threshold = f_y - gamma * next * next;
        } else {
            const double gap = expand_gap * r.alpha;
            threshold = f_last - gamma * gap * gap;
        }
        if (!accepted(v, threshold)) break;
        r.alpha = next;
        r.f_end = *v;
        f_last = *v;
        ++r.expansions;
    }
    return r;
}

}  // namespace

std::optional<ProbeAccept> probe(CountingOracle& oracle, const Vector& y, double f_y,
                                 int i, double sign_in, double abar, double gamma) {
    const double threshold = f_y - gamma * abar * abar;
    Vector trial = y;

    trial[i] = y[i] + abar * sign_in;
    if (const auto v = oracle.evaluate(trial); accepted(v, threshold))
        return ProbeAccept{sign_in, *v, 1};

    trial[i] = y[i] - abar * sign_in;
    if (const auto v = oracle.evaluate(trial); accepted(v, threshold))
        return ProbeAccept{-sign_in, *v, 2};

    return std::nullopt;
}

LinesearchResult extrapolate_standard(CountingOracle& oracle, const Vector& y, double f_y,
                                      int i, double sign, double abar, double f_probe,
                                      double gamma, double delta, double max_step) {
    return extrapolate(LoopRule::AgainstStart, oracle, y, f_y, i, sign, abar, f_probe,
                       gamma, delta, max_step);
}

LinesearchResult extrapolate_new(CountingOracle& oracle, const Vector& y, double f_y,
                                 int i, double sign, double abar, double f_probe,
                                 double gamma, double delta, double max_step) {
    return extrapolate(LoopRule::AgainstLast, oracle, y, f_y, i, sign, abar, f_probe,
                       gamma, delta, max_step);
}

LinesearchResult df_linesearch(LinesearchVariant variant, CountingOracle& oracle,
                               const Vector& y, double f_y, int i, double sign_in,
                               double abar, double gamma, double delta, double max_step) {
    const auto pr = probe(oracle, y, f_y, i, sign_in, abar, gamma);
    if (!pr) {
        LinesearchResult fail;
        fail.alpha = 0.0;
        fail.sign_out = sign_in;
        fail.evals_used = 2;
        fail.f_end = std::numeric_limits<double>::quiet_NaN();
        return fail;
    }
    LinesearchResult r =
        variant == LinesearchVariant::Standard
            ? extrapolate_standard(oracle, y, f_y, i, pr->sign, abar, pr->f_trial,
                                   gamma, delta, max_step)
            : extrapolate_new(oracle, y, f_y, i, pr->sign, abar, pr->f_trial,
                              gamma, delta, max_step);
    r.evals_used += pr->evals_used;
    return r;
}

}  // namespace dfls
