#include "oscnet/circular.hpp"

#include <cmath>

namespace oscnet {

double circular_mean(std::span<const double> x) {
    double s = 0.0, c = 0.0;
    for (double v : x) {
        s += std::sin(v);
        c += std::cos(v);
    }
    if (s == 0.0 && c == 0.0) return 0.0;
    return std::atan2(s, c);
}

double resultant_length(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double s = 0.0, c = 0.0;
    for (double v : x) {
        s += std::sin(v);
        c += std::cos(v);
    }
    const double n = static_cast<double>(x.size());
    return std::sqrt(s * s + c * c) / n;
}

double optimal_shift(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double theta = circular_mean(x);
    // At a local minimum of mean(wrap(x - theta)^2) the wrapped residuals
    // have zero mean; iterate theta <- theta + mean(wrap(x - theta)).
    for (int iter = 0; iter < 64; ++iter) {
        double m = 0.0;
        for (double v : x) m += wrap_angle(v - theta);
        m /= static_cast<double>(x.size());
        theta += m;
        if (std::abs(m) < 1e-15) break;
    }
    return wrap_angle(theta);
}

double circular_rms(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) {
        double r = wrap_angle(v);
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(x.size()));
}

double circular_rms_mod_shift(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double theta = optimal_shift(x);
    double s = 0.0;
    for (double v : x) {
        double r = wrap_angle(v - theta);
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(x.size()));
}

} // namespace oscnet
