#include "dfls/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dfls {

namespace {

std::uint64_t ceil_to_u64(long double x) {
    if (x <= 0.0L) return 0;
    const long double c = std::ceil(x);
    if (c >= 18'000'000'000'000'000'000.0L)
        throw std::overflow_error("bound exceeds 64-bit range");
    return static_cast<std::uint64_t>(c);
}

void require_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0,1)");
}

}  // namespace

TheoryContext make_theory_context(int n, double L, double f_min, const SolverConfig& config,
                                  double f_x0) {
    TheoryContext ctx;
    ctx.n = n;
    ctx.L = L;
    ctx.gamma = config.gamma;
    ctx.c = config.c;
    ctx.theta = config.theta;
    ctx.delta = config.delta;
    ctx.f_min = f_min;
    ctx.phi0 = lyapunov_phi(f_x0, config.alpha0, config.gamma, config.c);
    return ctx;
}

double c1_constant(const TheoryContext& ctx) {
    const double root_n = std::sqrt(static_cast<double>(ctx.n));
    const double success_branch =
        (ctx.gamma + ctx.L * (root_n + 1.0)) / std::min(ctx.theta, ctx.delta);
    const double failure_branch = (ctx.gamma + ctx.L) / ctx.theta;
    return std::max(success_branch, failure_branch);
}

double c_tilde_constant(const TheoryContext& ctx) {
    const double c2 = ctx.c * ctx.c;
    return std::min(ctx.gamma * c2, ctx.gamma * (1.0 - c2 / 2.0));
}

double lyapunov_phi(double f_x, double max_tilde_alpha, double gamma, double c) {
    return f_x + 0.5 * c * c * gamma * max_tilde_alpha * max_tilde_alpha;
}

double lyapunov_phi(double f_x, const StepMemory& mem, double gamma, double c) {
    return lyapunov_phi(f_x, mem.max_tilde_alpha(), gamma, c);
}

double gradient_bound_rhs(const TheoryContext& ctx, double max_tilde_alpha_next,
                          bool success) {
    const double root_n = std::sqrt(static_cast<double>(ctx.n));
    const double constant =
        success ? (ctx.gamma + ctx.L * (root_n + 1.0)) / std::min(ctx.theta, ctx.delta)
                : (ctx.gamma + ctx.L) / ctx.theta;
    return root_n * constant * max_tilde_alpha_next;
}

double gradient_bound_rhs(const TheoryContext& ctx, const StepMemory& mem_next,
                          bool success) {
    return gradient_bound_rhs(ctx, mem_next.max_tilde_alpha(), success);
}

bool check_gradient_bound_norm(const TheoryContext& ctx, double grad_norm,
                               double max_tilde_alpha_next, bool success) {
    const double rhs = gradient_bound_rhs(ctx, max_tilde_alpha_next, success);
    return grad_norm <= rhs * (1.0 + 1e-9);
}

bool check_gradient_bound(const TheoryContext& ctx, const Vector& grad,
                          const StepMemory& mem_next, bool success) {
    return check_gradient_bound_norm(ctx, norm2(grad), mem_next.max_tilde_alpha(), success);
}

bool check_phi_decrease(const TheoryContext& ctx, double phi_k, double phi_prev,
                        double max_tilde_alpha_k, bool success) {
    const double max_sq = max_tilde_alpha_k * max_tilde_alpha_k;
    double required;
    if (success) {
        required = -c_tilde_constant(ctx) * max_sq;
    } else {
        const double theta_sq = ctx.theta * ctx.theta;
        required = -0.5 * ctx.c * ctx.c * ctx.gamma * ((1.0 - theta_sq) / theta_sq) * max_sq;
    }
    return phi_k - phi_prev <= required + 1e-12;
}

bool check_phi_decrease(const TheoryContext& ctx, double phi_k, double phi_prev,
                        const StepMemory& mem_k, bool success) {
    return check_phi_decrease(ctx, phi_k, phi_prev, mem_k.max_tilde_alpha(), success);
}

std::uint64_t iteration_bound(const TheoryContext& ctx, double epsilon) {
    require_epsilon(epsilon);
    const long double gap = static_cast<long double>(ctx.phi0) - ctx.f_min;
    if (gap <= 0.0L) return 0;
    const long double c1 = c1_constant(ctx);
    const long double raw = static_cast<long double>(ctx.n) * c1 * c1 * gap /
                            c_tilde_constant(ctx) /
                            (static_cast<long double>(epsilon) * epsilon);
    return ceil_to_u64(raw);
}

double phi_star(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("phi_star: delta must lie in (0,1)");
    const double log_delta = std::log(delta);
    const double a_star = (-2.0 * log_delta - 1.0) / (2.0 * log_delta);
    if (a_star <= 0.0) return 1.0;
    const double value =
        -1.0 / (2.0 * log_delta) * std::pow(delta, -2.0 - 1.0 / log_delta);
    return std::max(1.0, value);
}

std::uint64_t feval_bound(const TheoryContext& ctx, double epsilon,
                          LinesearchVariant variant, double f0_minus_fbar) {
    require_epsilon(epsilon);
    if (!(f0_minus_fbar >= 0.0))
        throw std::invalid_argument("feval_bound: objective gap must be nonnegative");

    const std::uint64_t iters = iteration_bound(ctx, epsilon);
    const long double per_iteration = 2.0L * ctx.n;
    const long double c1 = c1_constant(ctx);
    const long double c2_gamma = static_cast<long double>(ctx.c) * ctx.c * ctx.gamma;
    const long double eps_sq = static_cast<long double>(epsilon) * epsilon;
    const long double base =
        static_cast<long double>(ctx.n) * c1 * c1 * f0_minus_fbar / c2_gamma / eps_sq;

    long double success_term;
    if (variant == LinesearchVariant::Standard) {
        success_term = phi_star(ctx.delta) * base;
    } else {
        const long double shrink = static_cast<long double>(ctx.delta) * ctx.delta /
                                   ((1.0L - ctx.delta) * (1.0L - ctx.delta));
        success_term = base * shrink;
    }

    const long double total = per_iteration * iters + std::ceil(success_term);
    return ceil_to_u64(total);
}

}  // namespace dfls
