#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace oscnet {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes/weights for an n-point Gauss-Legendre rule (cached per order).
const GaussLegendreRule& gauss_legendre(int n);

/// ∫_a^b f(x) dx with an n-point Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n = 32);

/// Composite rule: split [a, b] at the given interior breakpoints, apply an
/// n-point rule on each piece. Breakpoints outside (a, b) are ignored.
double gl_integrate_split(const std::function<double(double)>& f, double a, double b,
                          const std::vector<double>& breakpoints, int n = 32);

} // namespace oscnet
