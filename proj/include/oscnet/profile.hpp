#pragma once

#include <functional>
#include <string>
#include <vector>

namespace oscnet {

/// A scalar function on [0, 1]. Built-in kinds are stored as piecewise-affine
/// segments with exact integrals (including exact ∫ sin(f) and ∫ cos(f));
/// arbitrary functions are wrapped as callbacks and integrated by composite
/// Gauss-Legendre quadrature split at their declared breakpoints.
class ScalarProfile {
public:
    struct Segment {
        double lo = 0.0, hi = 1.0; // [lo, hi)
        double c0 = 0.0, c1 = 0.0; // value c0 + c1*x
    };

    ScalarProfile(); // zero profile

    static ScalarProfile constant(double c);
    /// x -> a*(x - 1/2)
    static ScalarProfile linear(double a);
    /// Step function: value[k] on [breaks[k], breaks[k+1]); breaks spans 0..1.
    static ScalarProfile step_table(std::vector<double> breaks, std::vector<double> values);
    /// Continuous piecewise-linear interpolation of (breaks[k], values[k]).
    static ScalarProfile linear_table(std::vector<double> breaks, std::vector<double> values);
    /// Explicit affine pieces; must tile [0, 1] without gaps.
    static ScalarProfile segments(std::vector<Segment> segs);
    /// Arbitrary callback with optional known discontinuity/kink locations.
    static ScalarProfile callback(std::function<double(double)> f,
                                  std::vector<double> breakpoints = {},
                                  int quad_points = 32);

    double operator()(double x) const;

    /// True when backed by affine segments (all integrals exact).
    bool exact() const { return !fn_; }

    /// Interior breakpoints (segment boundaries / declared kinks), sorted.
    const std::vector<double>& breakpoints() const { return breaks_; }

    /// Interior zeros of affine pieces (kinks of |f|); empty for callbacks.
    std::vector<double> zero_crossings() const;

    /// ∫_a^b f(x) dx
    double integral(double a, double b) const;
    /// ∫_a^b |f(x)| dx (splits affine pieces at their zero crossings)
    double integral_abs(double a, double b) const;
    /// ∫_a^b sin(f(x)) dx  (closed form per affine piece)
    double integral_sin(double a, double b) const;
    /// ∫_a^b cos(f(x)) dx
    double integral_cos(double a, double b) const;
    /// ∫_a^b g(f(x)) dx by quadrature split at breakpoints.
    double integral_of(const std::function<double(double)>& g, double a, double b,
                       int quad_points = 64) const;

    /// n * ∫_{I_i^n} f, i in 1..n (I_i^n = [(i-1)/n, i/n)).
    double cell_average(int n, int i) const;
    /// All n cell averages at once.
    std::vector<double> cell_averages(int n) const;

    /// Exact min/max over [0,1] for segment-backed profiles; sampled on a
    /// grid (plus breakpoints) for callbacks.
    double min_value() const;
    double max_value() const;
    double sup_abs() const;

    /// L2(I) norm.
    double l2_norm() const;

private:
    std::vector<Segment> segs_;           // used when fn_ is empty
    std::function<double(double)> fn_;    // callback kind
    std::vector<double> breaks_;          // interior breakpoints, sorted
    int quad_points_ = 32;

    const Segment& segment_at(double x) const;
};

} // namespace oscnet
