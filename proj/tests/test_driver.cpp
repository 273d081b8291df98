#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <thread>

#include "dfls/driver.hpp"
#include "dfls/problems.hpp"
#include "dfls/theory.hpp"

using namespace dfls;

namespace {

double sum_of_squares(const Vector& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

SolverConfig test_config() {
    SolverConfig cfg;
    cfg.c = 0.5;
    cfg.theta = 0.5;
    cfg.gamma = 0.1;
    cfg.delta = 0.5;
    return cfg;
}

}  // namespace

TEST_CASE("tentative step takes the larger of own memory and coupled maximum") {
    StepMemory mem(2, 1.0);

    mem.tilde_alpha = {0.1, 1.0};
    CHECK(tentative_step(mem, 0, 0.5) == 0.5);

    mem.tilde_alpha = {1.0, 1.0};
    CHECK(tentative_step(mem, 0, 0.5) == 1.0);

    mem.tilde_alpha = {2.0, 0.3};
    CHECK(tentative_step(mem, 1, 0.9) == 1.8);
}

TEST_CASE("memory update contracts on failure and adopts the accepted step on success") {
    StepMemory mem(1, 1.0);

    LinesearchResult fail;
    fail.alpha = 0.0;
    fail.sign_out = 1.0;
    update_memory(mem, 0, 0.4, fail, 0.5);
    CHECK(mem.tilde_alpha[0] == 0.2);
    CHECK(mem.sign[0] == 1.0);

    LinesearchResult ok;
    ok.alpha = 1.0;
    ok.sign_out = -1.0;
    update_memory(mem, 0, 0.5, ok, 0.5);
    CHECK(mem.tilde_alpha[0] == 1.0);
    CHECK(mem.sign[0] == -1.0);

    LinesearchResult same;
    same.alpha = 0.5;
    same.sign_out = -1.0;
    update_memory(mem, 0, 0.5, same, 0.5);
    CHECK(mem.tilde_alpha[0] == 0.5);
}

TEST_CASE("memory entries never reach zero") {
    StepMemory mem(1, 1.0);
    LinesearchResult fail;
    fail.alpha = 0.0;
    update_memory(mem, 0, 1e-320, fail, 0.5);
    CHECK(mem.tilde_alpha[0] > 0.0);
}

TEST_CASE("chained iteration at a minimizer fails every coordinate") {
    const SolverConfig cfg = test_config();
    CountingOracle oracle(sum_of_squares, 2);
    Vector x = {0.0, 0.0};
    double f_x = *oracle.evaluate(x);
    StepMemory mem(2, 0.7);

    const auto rec = iterate_chained(x, f_x, mem, oracle, cfg, 0);
    CHECK_FALSE(rec.success);
    CHECK(rec.successful_coords.empty());
    CHECK(x == Vector{0.0, 0.0});
    CHECK(mem.tilde_alpha[0] == 0.35);
    CHECK(mem.tilde_alpha[1] == 0.35);
    CHECK(rec.evals_cum == 5);  // 1 initial + 2 per coordinate
    CHECK(rec.outcomes[0] == CoordOutcome::Failure);
    CHECK(rec.outcomes[1] == CoordOutcome::Failure);
}

TEST_CASE("chained iteration walks the 2-D sphere to the origin in one pass") {
    const SolverConfig cfg = test_config();
    CountingOracle oracle(sum_of_squares, 2);
    Vector x = {1.0, 1.0};
    double f_x = *oracle.evaluate(x);
    StepMemory mem(2, 0.5);

    const auto rec = iterate_chained(x, f_x, mem, oracle, cfg, 0);
    CHECK(rec.success);
    CHECK(rec.successful_coords == std::vector<int>{0, 1});
    CHECK(x == Vector{0.0, 0.0});
    CHECK(f_x == 0.0);
    CHECK(rec.f_x == 2.0);
    CHECK(mem.tilde_alpha == std::vector<double>{1.0, 1.0});
    CHECK(mem.sign == std::vector<double>{-1.0, -1.0});
    CHECK(rec.expansions == std::vector<int>{1, 1});
}

TEST_CASE("a 1-D chained iteration is one linesearch plus one memory update") {
    const SolverConfig cfg = test_config();

    CountingOracle oracle([](const Vector& x) { return x[0] * x[0]; }, 1);
    Vector x = {1.0};
    double f_x = *oracle.evaluate(x);
    StepMemory mem(1, 0.5);
    const auto rec = iterate_chained(x, f_x, mem, oracle, cfg, 0);

    CountingOracle direct([](const Vector& x) { return x[0] * x[0]; }, 1);
    direct.evaluate({1.0});
    StepMemory ref_mem(1, 0.5);
    const double abar = tentative_step(ref_mem, 0, cfg.c);
    const auto r = df_linesearch(cfg.variant, direct, {1.0}, 1.0, 0, ref_mem.sign[0],
                                 abar, cfg.gamma, cfg.delta, cfg.stop.max_step);
    update_memory(ref_mem, 0, abar, r, cfg.theta);

    CHECK(x[0] == 1.0 + r.alpha * r.sign_out);
    CHECK(f_x == r.f_end);
    CHECK(mem.tilde_alpha == ref_mem.tilde_alpha);
    CHECK(mem.sign == ref_mem.sign);
    CHECK(rec.evals_cum == direct.eval_count());
}

TEST_CASE("modified iteration keeps the iterate when every coordinate fails") {
    const SolverConfig cfg = test_config();
    CountingOracle oracle(sum_of_squares, 2);
    Vector x = {0.0, 0.0};
    double f_x = *oracle.evaluate(x);
    StepMemory mem(2, 0.7);

    const auto rec = iterate_modified(x, f_x, mem, oracle, cfg, 0);
    CHECK_FALSE(rec.success);
    CHECK(x == Vector{0.0, 0.0});
    CHECK(rec.evals_cum == 5);
}

TEST_CASE("modified iteration breaks candidate ties toward the smaller index") {
    SolverConfig cfg = test_config();
    cfg.driver = DriverMode::Modified;
    CountingOracle oracle(sum_of_squares, 2);
    Vector x = {1.0, 1.0};
    double f_x = *oracle.evaluate(x);
    StepMemory mem(2, 0.5);

    const auto rec = iterate_modified(x, f_x, mem, oracle, cfg, 0);
    CHECK(rec.success);
    // Both coordinates produce a candidate with value 1; the first wins.
    CHECK(rec.successful_coords == std::vector<int>{0, 1});
    CHECK(x == Vector{0.0, 1.0});
    CHECK(f_x == 1.0);
}

TEST_CASE("modified iteration takes the single improving candidate") {
    SolverConfig cfg = test_config();
    cfg.driver = DriverMode::Modified;
    // Only the second coordinate can decrease f.
    CountingOracle oracle([](const Vector& x) { return x[0] * x[0] * 0.0 + x[1] * x[1]; },
                          2);
    Vector x = {0.0, 1.0};
    double f_x = *oracle.evaluate(x);
    StepMemory mem(2, 0.5);

    const auto rec = iterate_modified(x, f_x, mem, oracle, cfg, 0);
    CHECK(rec.successful_coords == std::vector<int>{1});
    CHECK(x[0] == 0.0);
    CHECK(x[1] != 1.0);
}

TEST_CASE("solve on the 2-D sphere converges to the stated tolerances") {
    SolverConfig cfg;  // library defaults
    CountingOracle oracle(sum_of_squares, 2);
    const auto res = solve({1.0, 1.0}, oracle, cfg);

    CHECK(res.status == SolveStatus::StepToleranceReached);
    CHECK(res.f_final <= 1e-12);
    CHECK(res.trace.back().max_tilde_alpha <= 1e-8);
    CHECK(res.evaluations == oracle.eval_count());
    CHECK(static_cast<long long>(res.trace.size()) == res.iterations);
}

TEST_CASE("an empty iteration budget returns immediately") {
    SolverConfig cfg;
    cfg.stop.max_iterations = 0;
    CountingOracle oracle(sum_of_squares, 2);
    const auto res = solve({1.0, 1.0}, oracle, cfg);
    CHECK(res.status == SolveStatus::IterationBudget);
    CHECK(res.iterations == 0);
    CHECK(res.x_final == Vector{1.0, 1.0});
    CHECK(res.f_final == 2.0);
    CHECK(res.evaluations == 1);
}

TEST_CASE("an empty evaluation budget returns before touching the oracle") {
    SolverConfig cfg;
    cfg.stop.max_evaluations = 0;
    CountingOracle oracle(sum_of_squares, 2);
    const auto res = solve({1.0, 1.0}, oracle, cfg);
    CHECK(res.status == SolveStatus::EvaluationBudget);
    CHECK(res.evaluations == 0);
    CHECK(res.iterations == 0);
}

TEST_CASE("a small evaluation budget stops the run with the budget status") {
    SolverConfig cfg;
    cfg.stop.max_evaluations = 10;
    CountingOracle oracle(sum_of_squares, 2);
    const auto res = solve({1.0, 1.0}, oracle, cfg);
    CHECK(res.status == SolveStatus::EvaluationBudget);
    CHECK(res.evaluations >= 10);
}

TEST_CASE("solve rejects bad start points") {
    SolverConfig cfg;
    CountingOracle oracle(sum_of_squares, 2);
    CHECK_THROWS_AS(solve({1.0}, oracle, cfg), std::invalid_argument);
    CHECK_THROWS_AS(solve({1.0, std::numeric_limits<double>::infinity()}, oracle, cfg),
                    std::invalid_argument);
}

TEST_CASE("identical runs produce identical traces") {
    for (auto driver : {DriverMode::Chained, DriverMode::Modified}) {
        for (auto variant : {LinesearchVariant::Standard, LinesearchVariant::New}) {
            SolverConfig cfg;
            cfg.driver = driver;
            cfg.variant = variant;
            CountingOracle a(sum_of_squares, 2);
            CountingOracle b(sum_of_squares, 2);
            const auto ra = solve({0.3, -1.7}, a, cfg);
            const auto rb = solve({0.3, -1.7}, b, cfg);
            REQUIRE(ra.trace.size() == rb.trace.size());
            CHECK(ra.x_final == rb.x_final);
            CHECK(ra.f_final == rb.f_final);
            CHECK(ra.evaluations == rb.evaluations);
            for (std::size_t k = 0; k < ra.trace.size(); ++k) {
                CHECK(ra.trace[k].f_x == rb.trace[k].f_x);
                CHECK(ra.trace[k].max_tilde_alpha == rb.trace[k].max_tilde_alpha);
                CHECK(ra.trace[k].phi == rb.trace[k].phi);
                CHECK(ra.trace[k].evals_cum == rb.trace[k].evals_cum);
            }
        }
    }
}

TEST_CASE("a linesearch capped on every coordinate ends the run") {
    SolverConfig cfg;
    cfg.stop.max_step = 64.0;
    // Strictly decreasing in both coordinate directions from anywhere.
    CountingOracle oracle([](const Vector& x) { return -x[0] - 2.0 * x[1]; }, 2);
    const auto res = solve({0.0, 0.0}, oracle, cfg);
    CHECK(res.status == SolveStatus::SafetyStopped);
    CHECK(res.iterations == 1);
    CHECK(res.trace[0].outcomes[0] == CoordOutcome::SuccessCapped);
    CHECK(res.trace[0].outcomes[1] == CoordOutcome::SuccessCapped);
}

TEST_CASE("solver invariants hold along suite traces") {
    for (const TestProblem& p : suite()) {
        for (auto driver : {DriverMode::Chained, DriverMode::Modified}) {
            for (auto variant : {LinesearchVariant::Standard, LinesearchVariant::New}) {
                SolverConfig cfg;
                cfg.driver = driver;
                cfg.variant = variant;
                cfg.stop.max_evaluations = 200'000;

                long long true_calls = 0;
                CountingOracle counted(
                    [&](const Vector& x) {
                        ++true_calls;
                        return p.objective(x);
                    },
                    p.dim);
                const auto res = solve(p.x0_default, counted, cfg);

                CHECK(res.evaluations == true_calls);

                double f_prev = res.trace.empty() ? 0.0 : res.trace.front().f_x;
                double max_prev = cfg.alpha0;
                long long evals_prev = 1;
                for (const auto& rec : res.trace) {
                    CHECK(rec.f_x <= f_prev);  // start-point values never increase
                    f_prev = rec.f_x;
                    CHECK(rec.success == !rec.successful_coords.empty());
                    if (!rec.partial() && !rec.success) {
                        CHECK(rec.max_tilde_alpha <= cfg.theta * max_prev);
                        CHECK(rec.evals_cum - evals_prev == 2LL * p.dim);
                    }
                    max_prev = rec.max_tilde_alpha;
                    evals_prev = rec.evals_cum;
                }
            }
        }
    }
}

TEST_CASE("per-success decrease and chain displacement hold on suite traces") {
    for (const TestProblem& p : suite()) {
        for (auto driver : {DriverMode::Chained, DriverMode::Modified}) {
            SolverConfig cfg;
            cfg.driver = driver;
            cfg.stop.max_evaluations = 200'000;
            CountingOracle oracle(p.objective, p.dim);
            const auto res = solve(p.x0_default, oracle, cfg);

            double max_entering = cfg.alpha0;  // max memory at the iteration start
            for (std::size_t k = 0; k < res.trace.size(); ++k) {
                const auto& rec = res.trace[k];
                const double f_next =
                    k + 1 < res.trace.size() ? res.trace[k + 1].f_x : res.f_final;
                if (rec.success && !rec.partial()) {
                    const double bound =
                        rec.f_x - cfg.gamma * cfg.c * cfg.c * max_entering * max_entering;
                    CHECK(f_next <= bound + 1e-12);
                }
                max_entering = rec.max_tilde_alpha;
            }
        }
    }
}

TEST_CASE("iterates move each coordinate by exactly its accepted step") {
    // Successful coordinates move by the post-update memory entry, failed
    // ones not at all, so |x_{k+1} - x_k| <= sqrt(n) * max memory.
    for (const char* name : {"sphere4", "diagquad5", "rosenbrock"}) {
        const TestProblem& p = *find_problem(name);
        SolverConfig cfg;
        CountingOracle oracle(p.objective, p.dim);
        Vector x = p.x0_default;
        double f_x = *oracle.evaluate(x);
        StepMemory mem(p.dim, cfg.alpha0);

        for (int k = 0; k < 40; ++k) {
            const Vector x_prev = x;
            const auto rec = iterate_chained(x, f_x, mem, oracle, cfg, k);
            double sq = 0.0;
            for (int i = 0; i < p.dim; ++i) {
                const double moved = std::abs(x[i] - x_prev[i]);
                if (is_success(rec.outcomes[i]))
                    CHECK(moved <= mem.tilde_alpha[i] * (1.0 + 1e-12));
                else
                    CHECK(moved == 0.0);
                sq += moved * moved;
            }
            const double root_n = std::sqrt(static_cast<double>(p.dim));
            CHECK(std::sqrt(sq) <= root_n * rec.max_tilde_alpha * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("independent solves on separate oracles run concurrently") {
    const TestProblem& p = *find_problem("sphere4");
    SolverConfig cfg_a, cfg_b;
    cfg_b.driver = DriverMode::Modified;

    CountingOracle oa(p.objective, p.dim), ob(p.objective, p.dim);
    const auto serial_a = solve(p.x0_default, oa, cfg_a);
    const auto serial_b = solve(p.x0_default, ob, cfg_b);

    SolveResult ta, tb;
    {
        CountingOracle pa(p.objective, p.dim), pb(p.objective, p.dim);
        std::thread t1([&] { ta = solve(p.x0_default, pa, cfg_a); });
        std::thread t2([&] { tb = solve(p.x0_default, pb, cfg_b); });
        t1.join();
        t2.join();
    }
    CHECK(ta.x_final == serial_a.x_final);
    CHECK(ta.evaluations == serial_a.evaluations);
    CHECK(tb.x_final == serial_b.x_final);
    CHECK(tb.evaluations == serial_b.evaluations);
}

TEST_CASE("modified driver matches a brute-force argmin over its candidates") {
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_int_distribution<int> dim_dist(1, 3);

    for (int instance = 0; instance < 50; ++instance) {
        const int n = dim_dist(rng);
        // Random SPD quadratic: f(x) = 1/2 x^T (M^T M + I) x + b^T x.
        std::vector<double> m(n * n), b(n);
        for (double& v : m) v = entry(rng);
        for (double& v : b) v = entry(rng);
        auto objective = [n, m, b](const Vector& x) {
            double quad = 0.0;
            for (int r = 0; r < n; ++r) {
                double mx = 0.0;
                for (int c = 0; c < n; ++c) mx += m[r * n + c] * x[c];
                quad += mx * mx;
            }
            double lin = 0.0, reg = 0.0;
            for (int i = 0; i < n; ++i) {
                lin += b[i] * x[i];
                reg += x[i] * x[i];
            }
            return 0.5 * (quad + reg) + lin;
        };

        SolverConfig cfg = test_config();
        cfg.driver = DriverMode::Modified;
        CountingOracle oracle(objective, n);
        Vector x(n);
        for (double& v : x) v = entry(rng);
        double f_x = *oracle.evaluate(x);
        StepMemory mem(n, 1.0);

        for (int k = 0; k < 6; ++k) {
            const Vector x_before = x;
            const double f_before = f_x;
            const auto rec = iterate_modified(x, f_x, mem, oracle, cfg, k);

            // Reconstruct the candidate set from the outcome: a successful
            // coordinate's accepted step is its updated memory entry.
            Vector best = x_before;
            double best_f = f_before;
            for (int i = 0; i < n; ++i) {
                if (!is_success(rec.outcomes[i])) continue;
                Vector cand = x_before;
                cand[i] = x_before[i] + mem.tilde_alpha[i] * mem.sign[i];
                const double cand_f = objective(cand);
                if (cand_f < best_f) {
                    best = cand;
                    best_f = cand_f;
                }
            }
            CHECK(x == best);
            CHECK(f_x == best_f);
        }
    }
}
