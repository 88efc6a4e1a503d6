#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace oscnet {

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(x, two_pi); // (-pi, pi], boundary sign per IEEE remainder
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

/// Circular mean arg(sum_i e^{i x_i}); returns 0 for an empty or fully
/// cancelling sample (resultant length ~ 0).
double circular_mean(std::span<const double> x);

/// Resultant length R = |n^-1 sum e^{i x_i}| in [0, 1].
double resultant_length(std::span<const double> x);

/// Circular variance 1 - R.
inline double circular_variance(std::span<const double> x) { return 1.0 - resultant_length(x); }

/// Shift minimizing n^-1 sum wrap(x_i - theta)^2: circular mean refined by
/// iterating theta <- theta + mean(wrap(x - theta)) to a fixed point.
double optimal_shift(std::span<const double> x);

/// sqrt(n^-1 sum wrap(x_i)^2): circular RMS of residuals about 0.
double circular_rms(std::span<const double> x);

/// min over theta of the circular RMS of (x - theta).
double circular_rms_mod_shift(std::span<const double> x);

} // namespace oscnet
