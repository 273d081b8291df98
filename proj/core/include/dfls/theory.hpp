#pragma once

#include <cstdint>

#include "dfls/core.hpp"

namespace dfls {

/// Everything the runtime bound checkers need to know about a run: the
/// dimension, the gradient Lipschitz constant, the solver parameters, a
/// lower bound on the objective, and the initial merit value.
struct TheoryContext {
    int n = 1;
    double L = 1.0;
    double gamma = 1e-6;
    double c = 0.5;
    double theta = 0.5;
    double delta = 0.5;
    double f_min = 0.0;
    double phi0 = 0.0;
};

/// Context for a run of `config` from a start value f(x0), on a problem
/// with gradient Lipschitz constant L and objective lower bound f_min.
TheoryContext make_theory_context(int n, double L, double f_min, const SolverConfig& config,
                                  double f_x0);

/// max( (gamma + L(sqrt(n)+1)) / min(theta, delta), (gamma + L) / theta )
double c1_constant(const TheoryContext& ctx);

/// min( gamma c^2, gamma (1 - c^2/2) )
double c_tilde_constant(const TheoryContext& ctx);

/// Merit value f_x + (1/2) c^2 gamma (max step memory)^2.
double lyapunov_phi(double f_x, double max_tilde_alpha, double gamma, double c);
double lyapunov_phi(double f_x, const StepMemory& mem, double gamma, double c);

/// Right-hand side of the per-iteration gradient bound, in terms of the
/// post-update step memory. Success and failure iterations have different
/// constants; the success constant dominates whenever theta >= min(theta, delta).
double gradient_bound_rhs(const TheoryContext& ctx, double max_tilde_alpha_next,
                          bool success);
double gradient_bound_rhs(const TheoryContext& ctx, const StepMemory& mem_next,
                          bool success);

/// True iff |grad|_2 <= gradient_bound_rhs * (1 + 1e-9).
bool check_gradient_bound(const TheoryContext& ctx, const Vector& grad,
                          const StepMemory& mem_next, bool success);
bool check_gradient_bound_norm(const TheoryContext& ctx, double grad_norm,
                               double max_tilde_alpha_next, bool success);

/// Per-iteration merit decrease check. On success iterations the decrease
/// must reach c_tilde * (max memory)^2; on failure iterations it must reach
/// (1/2) c^2 gamma (1 - theta^2)/theta^2 * (max memory)^2. Absolute slack 1e-12.
bool check_phi_decrease(const TheoryContext& ctx, double phi_k, double phi_prev,
                        double max_tilde_alpha_k, bool success);
bool check_phi_decrease(const TheoryContext& ctx, double phi_k, double phi_prev,
                        const StepMemory& mem_k, bool success);

/// ceil( n c1^2 (phi0 - f_min) / c_tilde * eps^-2 ): upper bound on the
/// index of the first iterate with gradient norm <= eps.
/// Throws std::invalid_argument for eps outside (0,1) and
/// std::overflow_error if the bound exceeds the return type.
std::uint64_t iteration_bound(const TheoryContext& ctx, double epsilon);

/// max over a >= 0 of (a+1) delta^(2a). Equals 1 for delta <= exp(-1/2)
/// (the maximizer of the relaxation is negative there).
double phi_star(double delta);

/// Upper bound on the number of function evaluations spent before the
/// gradient norm first drops to eps. f0_minus_fbar is the computable
/// surrogate f(x0) - f_min for the objective gap. Accounting differs per
/// linesearch variant. Errors as iteration_bound.
std::uint64_t feval_bound(const TheoryContext& ctx, double epsilon,
                          LinesearchVariant variant, double f0_minus_fbar);

}  // namespace dfls
