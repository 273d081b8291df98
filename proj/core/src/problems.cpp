#include "dfls/problems.hpp"

#include <cmath>

namespace dfls {

namespace {

TestProblem make_sphere(int n) {
    TestProblem p;
    p.name = "sphere" + std::to_string(n);
    p.dim = n;
    p.objective = [](const Vector& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    p.gradient = [](const Vector& x) {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
        return g;
    };
    p.lipschitz_L = 2.0;
    p.f_min = 0.0;
    p.x0_default.assign(n, 1.0);
    return p;
}

// f(x) = (1/2) sum_i i * x_i^2 with i = 1..n, so the Hessian is diag(1..n).
TestProblem make_diag_quadratic(int n) {
    TestProblem p;
    p.name = "diagquad" + std::to_string(n);
    p.dim = n;
    p.objective = [](const Vector& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += (static_cast<double>(i) + 1.0) * x[i] * x[i];
        return 0.5 * s;
    };
    p.gradient = [](const Vector& x) {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            g[i] = (static_cast<double>(i) + 1.0) * x[i];
        return g;
    };
    p.lipschitz_L = static_cast<double>(n);
    p.f_min = 0.0;
    p.x0_default.assign(n, 1.0);
    return p;
}

// Largest spectral norm of the Rosenbrock Hessian over a 241x241 grid on
// [-3,3]^2 (step 0.025, endpoints included). Both the diagonal dominance
// and the off-diagonal magnitude peak at the corners (|x| = 3, y = -3),
// which are on the grid, so the grid maximum is the box maximum.
double rosenbrock_box_lipschitz() {
    double max_norm = 0.0;
    for (int ix = 0; ix <= 240; ++ix) {
        const double x = -3.0 + 0.025 * ix;
        for (int iy = 0; iy <= 240; ++iy) {
            const double y = -3.0 + 0.025 * iy;
            const double h11 = 2.0 - 400.0 * y + 1200.0 * x * x;
            const double h12 = -400.0 * x;
            const double h22 = 200.0;
            const double mean = 0.5 * (h11 + h22);
            const double diff = 0.5 * (h11 - h22);
            const double lam = std::abs(mean) + std::sqrt(diff * diff + h12 * h12);
            max_norm = std::max(max_norm, lam);
        }
    }
    return max_norm;
}

TestProblem make_rosenbrock() {
    TestProblem p;
    p.name = "rosenbrock";
    p.dim = 2;
    p.objective = [](const Vector& x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    p.gradient = [](const Vector& x) {
        const double b = x[1] - x[0] * x[0];
        return Vector{-2.0 * (1.0 - x[0]) - 400.0 * x[0] * b, 200.0 * b};
    };
    p.lipschitz_L = rosenbrock_box_lipschitz();
    p.l_valid_radius = 3.0;
    p.f_min = 0.0;
    p.x0_default = {-1.2, 1.0};
    return p;
}

// Weighted pseudo-Huber: f(x) = sum_i w_i b^2 (sqrt(1 + (x_i/b)^2) - 1)
// with w = (1, 10), b = 0.5. Smooth |x|-like tails, curvature w_i at the
// origin, so the gradient is Lipschitz with constant max_i w_i.
TestProblem make_pseudohuber() {
    constexpr double b = 0.5;
    static const Vector w = {1.0, 10.0};
    TestProblem p;
    p.name = "pseudohuber";
    p.dim = 2;
    p.objective = [](const Vector& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double t = x[i] / b;
            s += w[i] * b * b * (std::sqrt(1.0 + t * t) - 1.0);
        }
        return s;
    };
    p.gradient = [](const Vector& x) {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double t = x[i] / b;
            g[i] = w[i] * x[i] / std::sqrt(1.0 + t * t);
        }
        return g;
    };
    p.lipschitz_L = 10.0;
    p.f_min = 0.0;
    p.x0_default = {3.0, -2.0};
    return p;
}

}  // namespace

const std::vector<TestProblem>& suite() {
    static const std::vector<TestProblem> problems = [] {
        std::vector<TestProblem> v;
        for (int n : {1, 2, 4, 10}) v.push_back(make_sphere(n));
        for (int n : {2, 3, 5}) v.push_back(make_diag_quadratic(n));
        v.push_back(make_rosenbrock());
        v.push_back(make_pseudohuber());
        return v;
    }();
    return problems;
}

const TestProblem* find_problem(const std::string& name) {
    for (const TestProblem& p : suite())
        if (p.name == name) return &p;
    return nullptr;
}

std::vector<std::string> problem_names() {
    std::vector<std::string> names;
    for (const TestProblem& p : suite()) names.push_back(p.name);
    return names;
}

}  // namespace dfls
