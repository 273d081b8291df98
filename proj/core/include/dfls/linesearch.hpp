#pragma once

#include "dfls/core.hpp"

namespace dfls {

/// Result of one derivative-free coordinate linesearch.
///
/// alpha is 0 on failure, otherwise abar / delta^expansions computed by pure
/// repeated division, so reconstructing that product reproduces alpha
/// bit-for-bit. f_end is the objective at the accepted point (NaN when
/// alpha = 0). safety_stopped marks an extrapolation ended by the step cap
/// rather than by a failing test; in that case the final test evaluation
/// never happened.
struct LinesearchResult {
    double alpha = 0.0;
    double sign_out = 1.0;
    int expansions = 0;
    long long evals_used = 0;
    double f_end = 0.0;
    bool safety_stopped = false;
};

struct ProbeAccept {
    double sign;     ///< accepted direction relative to e_i, +1 or -1
    double f_trial;  ///< objective at y + abar*sign*e_i
    long long evals_used;  ///< 1 if the first trial was accepted, else 2
};

/// Test y + abar*sign_in*e_i, then y - abar*sign_in*e_i, against
/// f(y) - gamma*abar^2. Returns the accepted direction and trial value, or
/// nullopt when both directions fail (always exactly 2 evaluations then).
/// Non-finite trial values count as rejections.
std::optional<ProbeAccept> probe(CountingOracle& oracle, const Vector& y, double f_y,
                                 int i, double sign_in, double abar, double gamma);

/// Expansion loop testing alpha/delta against f(y) - gamma*(alpha/delta)^2
/// until a test fails (that evaluation is counted) or alpha/delta exceeds
/// max_step (no further evaluation). f_probe is the probe's trial value.
LinesearchResult extrapolate_standard(CountingOracle& oracle, const Vector& y, double f_y,
                                      int i, double sign, double abar, double f_probe,
                                      double gamma, double delta, double max_step);

/// Expansion loop testing alpha/delta against the last accepted value minus
/// gamma*((1/delta - 1)*alpha)^2, i.e. sufficient decrease between
/// consecutive points. Same termination and accounting rules as the
/// standard loop; the last accepted value is carried, never recomputed.
LinesearchResult extrapolate_new(CountingOracle& oracle, const Vector& y, double f_y,
                                 int i, double sign, double abar, double f_probe,
                                 double gamma, double delta, double max_step);

/// Probe then the variant's extrapolation. On probe failure returns
/// alpha = 0 with the input direction unchanged and evals_used = 2.
LinesearchResult df_linesearch(LinesearchVariant variant, CountingOracle& oracle,
                               const Vector& y, double f_y, int i, double sign_in,
                               double abar, double gamma, double delta, double max_step);

}  // namespace dfls
