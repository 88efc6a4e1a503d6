#include "oscnet/profile.hpp"

#include <algorithm>
#include <cmath>

#include "oscnet/errors.hpp"
#include "oscnet/quadrature.hpp"

namespace oscnet {

namespace {

double sinc(double t) {
    if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

void check_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + ": coordinate outside [0,1]");
}

} // namespace

ScalarProfile::ScalarProfile() { segs_ = {Segment{0.0, 1.0, 0.0, 0.0}}; }

ScalarProfile ScalarProfile::constant(double c) {
    ScalarProfile p;
    p.segs_ = {Segment{0.0, 1.0, c, 0.0}};
    return p;
}

ScalarProfile ScalarProfile::linear(double a) {
    ScalarProfile p;
    p.segs_ = {Segment{0.0, 1.0, -0.5 * a, a}};
    return p;
}

ScalarProfile ScalarProfile::step_table(std::vector<double> breaks, std::vector<double> values) {
    if (breaks.size() < 2 || values.size() + 1 != breaks.size())
        throw DomainError("step_table: need k+1 breakpoints for k values");
    if (breaks.front() != 0.0 || breaks.back() != 1.0 || !std::is_sorted(breaks.begin(), breaks.end()))
        throw DomainError("step_table: breakpoints must be sorted and span [0,1]");
    std::vector<Segment> segs;
    for (std::size_t k = 0; k < values.size(); ++k)
        segs.push_back(Segment{breaks[k], breaks[k + 1], values[k], 0.0});
    return segments(std::move(segs));
}

ScalarProfile ScalarProfile::linear_table(std::vector<double> breaks, std::vector<double> values) {
    if (breaks.size() < 2 || values.size() != breaks.size())
        throw DomainError("linear_table: need one value per breakpoint");
    if (breaks.front() != 0.0 || breaks.back() != 1.0 || !std::is_sorted(breaks.begin(), breaks.end()))
        throw DomainError("linear_table: breakpoints must be sorted and span [0,1]");
    std::vector<Segment> segs;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double lo = breaks[k], hi = breaks[k + 1];
        if (hi == lo) continue;
        const double slope = (values[k + 1] - values[k]) / (hi - lo);
        segs.push_back(Segment{lo, hi, values[k] - slope * lo, slope});
    }
    return segments(std::move(segs));
}

ScalarProfile ScalarProfile::segments(std::vector<Segment> segs) {
    if (segs.empty()) throw DomainError("segments: empty");
    std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    if (segs.front().lo != 0.0 || segs.back().hi != 1.0)
        throw DomainError("segments: pieces must span [0,1]");
    for (std::size_t k = 0; k + 1 < segs.size(); ++k)
        if (segs[k].hi != segs[k + 1].lo) throw DomainError("segments: pieces must be contiguous");
    ScalarProfile p;
    p.segs_ = std::move(segs);
    for (std::size_t k = 0; k + 1 < p.segs_.size(); ++k) p.breaks_.push_back(p.segs_[k].hi);
    return p;
}

ScalarProfile ScalarProfile::callback(std::function<double(double)> f,
                                      std::vector<double> breakpoints, int quad_points) {
    ScalarProfile p;
    p.segs_.clear();
    p.fn_ = std::move(f);
    std::sort(breakpoints.begin(), breakpoints.end());
    p.breaks_ = std::move(breakpoints);
    p.quad_points_ = std::max(32, quad_points);
    return p;
}

const ScalarProfile::Segment& ScalarProfile::segment_at(double x) const {
    // last segment owns x = 1
    auto it = std::upper_bound(segs_.begin(), segs_.end(), x,
                               [](double v, const Segment& s) { return v < s.hi; });
    if (it == segs_.end()) --it;
    return *it;
}

double ScalarProfile::operator()(double x) const {
    check_unit_interval(x, "ScalarProfile");
    if (fn_) return fn_(x);
    const Segment& s = segment_at(x);
    return s.c0 + s.c1 * x;
}

double ScalarProfile::integral(double a, double b) const {
    if (fn_) return gl_integrate_split(fn_, a, b, breaks_, quad_points_);
    double sum = 0.0;
    for (const Segment& s : segs_) {
        const double lo = std::max(a, s.lo), hi = std::min(b, s.hi);
        if (hi <= lo) continue;
        sum += s.c0 * (hi - lo) + 0.5 * s.c1 * (hi * hi - lo * lo);
    }
    return sum;
}

std::vector<double> ScalarProfile::zero_crossings() const {
    std::vector<double> out;
    if (fn_) return out;
    for (const Segment& s : segs_) {
        if (s.c1 == 0.0) continue;
        const double root = -s.c0 / s.c1;
        if (root > s.lo && root < s.hi) out.push_back(root);
    }
    return out;
}

double ScalarProfile::integral_abs(double a, double b) const {
    if (fn_) {
        auto g = [this](double x) { return std::abs(fn_(x)); };
        return gl_integrate_split(g, a, b, breaks_, quad_points_);
    }
    double sum = 0.0;
    for (const Segment& s : segs_) {
        const double lo = std::max(a, s.lo), hi = std::min(b, s.hi);
        if (hi <= lo) continue;
        auto piece = [&](double u, double v) {
            return std::abs(s.c0 * (v - u) + 0.5 * s.c1 * (v * v - u * u));
        };
        if (s.c1 != 0.0) {
            const double root = -s.c0 / s.c1;
            if (root > lo && root < hi) {
                sum += piece(lo, root) + piece(root, hi);
                continue;
            }
        }
        sum += piece(lo, hi);
    }
    return sum;
}

double ScalarProfile::integral_sin(double a, double b) const {
    if (fn_) {
        auto g = [this](double x) { return std::sin(fn_(x)); };
        return gl_integrate_split(g, a, b, breaks_, quad_points_);
    }
    double sum = 0.0;
    for (const Segment& s : segs_) {
        const double lo = std::max(a, s.lo), hi = std::min(b, s.hi);
        if (hi <= lo) continue;
        const double len = hi - lo;
        const double mid = s.c0 + s.c1 * 0.5 * (lo + hi);
        sum += len * std::sin(mid) * sinc(0.5 * s.c1 * len);
    }
    return sum;
}

double ScalarProfile::integral_cos(double a, double b) const {
    if (fn_) {
        auto g = [this](double x) { return std::cos(fn_(x)); };
        return gl_integrate_split(g, a, b, breaks_, quad_points_);
    }
    double sum = 0.0;
    for (const Segment& s : segs_) {
        const double lo = std::max(a, s.lo), hi = std::min(b, s.hi);
        if (hi <= lo) continue;
        const double len = hi - lo;
        const double mid = s.c0 + s.c1 * 0.5 * (lo + hi);
        sum += len * std::cos(mid) * sinc(0.5 * s.c1 * len);
    }
    return sum;
}

double ScalarProfile::integral_of(const std::function<double(double)>& g, double a, double b,
                                  int quad_points) const {
    auto h = [this, &g](double x) { return g((*this)(x)); };
    return gl_integrate_split(h, a, b, breaks_, quad_points);
}

double ScalarProfile::cell_average(int n, int i) const {
    if (n <= 0) throw DomainError("cell_average: n must be positive");
    if (i < 1 || i > n) throw DomainError("cell_average: index outside [n]");
    const double lo = static_cast<double>(i - 1) / n;
    const double hi = static_cast<double>(i) / n;
    return integral(lo, hi) * n;
}

std::vector<double> ScalarProfile::cell_averages(int n) const {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) out[i - 1] = cell_average(n, i);
    return out;
}

double ScalarProfile::min_value() const {
    if (!fn_) {
        double m = segs_.front().c0 + segs_.front().c1 * segs_.front().lo;
        for (const Segment& s : segs_)
            m = std::min({m, s.c0 + s.c1 * s.lo, s.c0 + s.c1 * s.hi});
        return m;
    }
    double m = fn_(0.0);
    const int grid = 4096;
    for (int k = 0; k <= grid; ++k) m = std::min(m, fn_(static_cast<double>(k) / grid));
    for (double b : breaks_) m = std::min(m, fn_(b));
    return m;
}

double ScalarProfile::max_value() const {
    if (!fn_) {
        double m = segs_.front().c0 + segs_.front().c1 * segs_.front().lo;
        for (const Segment& s : segs_)
            m = std::max({m, s.c0 + s.c1 * s.lo, s.c0 + s.c1 * s.hi});
        return m;
    }
    double m = fn_(0.0);
    const int grid = 4096;
    for (int k = 0; k <= grid; ++k) m = std::max(m, fn_(static_cast<double>(k) / grid));
    for (double b : breaks_) m = std::max(m, fn_(b));
    return m;
}

double ScalarProfile::sup_abs() const { return std::max(std::abs(min_value()), std::abs(max_value())); }

double ScalarProfile::l2_norm() const {
    if (!fn_) {
        double sum = 0.0;
        for (const Segment& s : segs_) {
            // ∫ (c0 + c1 x)^2 over the segment
            const double a = s.lo, b = s.hi;
            sum += s.c0 * s.c0 * (b - a) + s.c0 * s.c1 * (b * b - a * a) +
                   s.c1 * s.c1 * (b * b * b - a * a * a) / 3.0;
        }
        return std::sqrt(sum);
    }
    auto g = [this](double x) {
        double v = fn_(x);
        return v * v;
    };
    return std::sqrt(gl_integrate_split(g, 0.0, 1.0, breaks_, std::max(64, quad_points_)));
}

} // namespace oscnet
