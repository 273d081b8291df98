#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dfls/core.hpp"

namespace dfls {

/// A built-in test problem. Gradient, Lipschitz constant of the gradient,
/// and minimum value are present where known; l_valid_radius, when set,
/// restricts lipschitz_L to the box |x|_inf <= l_valid_radius.
struct TestProblem {
    std::string name;
    int dim = 1;
    std::function<double(const Vector&)> objective;
    std::function<Vector(const Vector&)> gradient;  ///< empty when unavailable
    std::optional<double> lipschitz_L;
    std::optional<double> f_min;
    Vector x0_default;
    std::optional<double> l_valid_radius;

    bool has_gradient() const { return static_cast<bool>(gradient); }

    /// True when lipschitz_L applies at x (inside the validity box, if any).
    bool lipschitz_valid_at(double x_inf_norm) const {
        return lipschitz_L.has_value() &&
               (!l_valid_radius || x_inf_norm <= *l_valid_radius);
    }
};

/// The built-in problems: spheres (n = 1, 2, 4, 10), diagonal quadratics
/// (n = 2, 3, 5), Rosenbrock, and a weighted pseudo-Huber smoothing of the
/// absolute value.
const std::vector<TestProblem>& suite();

/// Problem by name, or nullptr.
const TestProblem* find_problem(const std::string& name);

std::vector<std::string> problem_names();

}  // namespace dfls
