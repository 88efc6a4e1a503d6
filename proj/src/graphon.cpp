#include "oscnet/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscnet/errors.hpp"
#include "oscnet/quadrature.hpp"

namespace oscnet {

namespace {

void check_coords(double x, double y) {
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
        throw DomainError("Graphon::evaluate: coordinates outside [0,1]^2");
}

// Area within the box [a1,a2] x [b1,b2] of {x - y <= t}.
double area_below_diagonal(double a1, double a2, double b1, double b2, double t) {
    const double h = a2 - a1;
    auto q = [h](double s) {
        if (s <= 0.0) return 0.0;
        if (s <= h) return 0.5 * s * s;
        return 0.5 * h * h + h * (s - h);
    };
    return q(b2 + t - a1) - q(b1 + t - a1);
}

// Area within the box of {|x-y| <= kappa or |x-y| >= 1-kappa}.
double band_area(double a1, double a2, double b1, double b2, double kappa) {
    const double box = (a2 - a1) * (b2 - b1);
    const double inner = area_below_diagonal(a1, a2, b1, b2, kappa) -
                         area_below_diagonal(a1, a2, b1, b2, -kappa);
    const double upper = box - area_below_diagonal(a1, a2, b1, b2, 1.0 - kappa);
    const double lower = area_below_diagonal(a1, a2, b1, b2, kappa - 1.0);
    return inner + upper + lower;
}

void cell_bounds(int n, int i, int j, double& x0, double& x1, double& y0, double& y1) {
    if (n <= 0) throw DomainError("cell average: n must be positive");
    if (i < 1 || i > n || j < 1 || j > n) throw DomainError("cell average: index outside [n]");
    x0 = static_cast<double>(i - 1) / n;
    x1 = static_cast<double>(i) / n;
    y0 = static_cast<double>(j - 1) / n;
    y1 = static_cast<double>(j) / n;
}

// min/max of a profile over [lo, hi] (exact for affine-backed profiles).
void profile_range_on(const ScalarProfile& f, double lo, double hi, double& mn, double& mx) {
    mn = std::numeric_limits<double>::infinity();
    mx = -mn;
    auto consider = [&](double x) {
        double v = f(x);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    };
    consider(lo);
    consider(hi);
    for (double b : f.breakpoints())
        if (b > lo && b < hi) consider(b);
    if (!f.exact()) {
        for (int k = 1; k < 16; ++k) consider(lo + (hi - lo) * k / 16.0);
    }
}

} // namespace

Graphon Graphon::constant(double p) {
    Graphon g;
    g.kind_ = Kind::Constant;
    g.p_ = p;
    g.c1_ = g.c2_ = g.l2_ = std::abs(p);
    g.nonnegative_ = p >= 0.0;
    g.range01_ = p >= 0.0 && p <= 1.0;
    g.symmetric_ = true;
    return g;
}

Graphon Graphon::rank1(ScalarProfile h1, ScalarProfile h2) {
    Graphon g;
    g.kind_ = Kind::Rank1;
    g.h1_ = std::move(h1);
    g.h2_ = std::move(h2);
    g.c2_ = g.h1_.sup_abs() * g.h2_.integral_abs(0.0, 1.0);
    g.c1_ = g.h2_.sup_abs() * g.h1_.integral_abs(0.0, 1.0);
    g.l2_ = g.h1_.l2_norm() * g.h2_.l2_norm();
    const double lo1 = g.h1_.min_value(), hi1 = g.h1_.max_value();
    const double lo2 = g.h2_.min_value(), hi2 = g.h2_.max_value();
    const double products[4] = {lo1 * lo2, lo1 * hi2, hi1 * lo2, hi1 * hi2};
    const double pmin = *std::min_element(products, products + 4);
    const double pmax = *std::max_element(products, products + 4);
    g.nonnegative_ = pmin >= 0.0;
    g.range01_ = pmin >= 0.0 && pmax <= 1.0;
    g.x_breaks_ = g.h1_.breakpoints();
    g.y_breaks_ = g.h2_.breakpoints();
    return g;
}

Graphon Graphon::nearest_neighbor(double kappa) {
    if (!(kappa > 0.0 && kappa <= 0.5))
        throw DomainError("nearest_neighbor: kappa must lie in (0, 1/2]");
    Graphon g;
    g.kind_ = Kind::NearestNeighbor;
    g.kappa_ = kappa;
    g.c1_ = g.c2_ = 2.0 * kappa; // ∫ W(x,y) dy = 2 kappa for every x
    g.l2_ = std::sqrt(2.0 * kappa);
    g.nonnegative_ = true;
    g.range01_ = true;
    g.symmetric_ = true;
    return g;
}

Graphon Graphon::piecewise_table(std::vector<double> xs, std::vector<double> ys,
                                 std::vector<std::vector<double>> values) {
    if (xs.size() < 2 || ys.size() < 2 || xs.front() != 0.0 || xs.back() != 1.0 ||
        ys.front() != 0.0 || ys.back() != 1.0 || !std::is_sorted(xs.begin(), xs.end()) ||
        !std::is_sorted(ys.begin(), ys.end()))
        throw DomainError("piecewise_table: grids must be sorted and span [0,1]");
    if (values.size() + 1 != xs.size())
        throw DomainError("piecewise_table: need one value row per x interval");
    for (const auto& row : values)
        if (row.size() + 1 != ys.size())
            throw DomainError("piecewise_table: need one value per y interval");

    Graphon g;
    g.kind_ = Kind::PiecewiseTable;
    g.xs_ = std::move(xs);
    g.ys_ = std::move(ys);
    g.table_ = std::move(values);

    double c2 = 0.0, c1max = 0.0, l2sq = 0.0;
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    for (std::size_t i = 0; i + 1 < g.xs_.size(); ++i) {
        double row_int = 0.0;
        for (std::size_t j = 0; j + 1 < g.ys_.size(); ++j) {
            const double v = g.table_[i][j];
            const double dx = g.xs_[i + 1] - g.xs_[i];
            const double dy = g.ys_[j + 1] - g.ys_[j];
            row_int += std::abs(v) * dy;
            l2sq += v * v * dx * dy;
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        c2 = std::max(c2, row_int);
    }
    for (std::size_t j = 0; j + 1 < g.ys_.size(); ++j) {
        double col_int = 0.0;
        for (std::size_t i = 0; i + 1 < g.xs_.size(); ++i)
            col_int += std::abs(g.table_[i][j]) * (g.xs_[i + 1] - g.xs_[i]);
        c1max = std::max(c1max, col_int);
    }
    g.c1_ = c1max;
    g.c2_ = c2;
    g.l2_ = std::sqrt(l2sq);
    g.nonnegative_ = mn >= 0.0;
    g.range01_ = mn >= 0.0 && mx <= 1.0;
    g.symmetric_ = false;
    if (g.xs_ == g.ys_) {
        bool sym = true;
        for (std::size_t i = 0; sym && i < g.table_.size(); ++i)
            for (std::size_t j = 0; sym && j < g.table_.size(); ++j)
                sym = g.table_[i][j] == g.table_[j][i];
        g.symmetric_ = sym;
    }
    g.x_breaks_.assign(g.xs_.begin() + 1, g.xs_.end() - 1);
    g.y_breaks_.assign(g.ys_.begin() + 1, g.ys_.end() - 1);
    return g;
}

Graphon Graphon::callback(std::function<double(double, double)> f, double c1_bound,
                          double c2_bound, double l2_norm, bool nonnegative,
                          bool range_in_unit_interval, bool symmetric,
                          std::vector<double> x_breakpoints, std::vector<double> y_breakpoints,
                          int quad_points) {
    Graphon g;
    g.kind_ = Kind::Callback;
    g.fn_ = std::move(f);
    g.c1_ = c1_bound;
    g.c2_ = c2_bound;
    g.l2_ = l2_norm;
    g.nonnegative_ = nonnegative;
    g.range01_ = range_in_unit_interval;
    g.symmetric_ = symmetric;
    std::sort(x_breakpoints.begin(), x_breakpoints.end());
    std::sort(y_breakpoints.begin(), y_breakpoints.end());
    g.x_breaks_ = std::move(x_breakpoints);
    g.y_breaks_ = std::move(y_breakpoints);
    g.quad_points_ = std::max(32, quad_points);

    // declared bounds are upper bounds; reject declarations the kernel violates
    const double tol = 1e-6;
    const double c2_num = g.numeric_row_bound(0, 256, 1024);
    if (c2_num > g.c2_ * (1.0 + tol) + 1e-9)
        throw ConstructionError("callback graphon: declared c2_bound is below the measured row integral");
    const double c1_num = g.numeric_row_bound(1, 256, 1024);
    if (c1_num > g.c1_ * (1.0 + tol) + 1e-9)
        throw ConstructionError("callback graphon: declared c1_bound is below the measured column integral");
    const double l2_num = g.numeric_l2_norm(256, 256);
    if (l2_num > g.l2_ * (1.0 + tol) + 1e-9)
        throw ConstructionError("callback graphon: declared l2_norm is below the measured norm");
    return g;
}

std::string Graphon::kind_name() const {
    switch (kind_) {
        case Kind::Constant: return "constant";
        case Kind::Rank1: return "rank1";
        case Kind::NearestNeighbor: return "nearest-neighbor";
        case Kind::PiecewiseTable: return "piecewise-table";
        case Kind::Callback: return "callback";
    }
    return "?";
}

double Graphon::evaluate(double x, double y) const {
    check_coords(x, y);
    switch (kind_) {
        case Kind::Constant:
            return p_;
        case Kind::Rank1:
            return h1_(x) * h2_(y);
        case Kind::NearestNeighbor: {
            const double d = std::abs(x - y);
            return (d <= kappa_ || d >= 1.0 - kappa_) ? 1.0 : 0.0;
        }
        case Kind::PiecewiseTable: {
            auto idx = [](const std::vector<double>& grid, double v) {
                auto it = std::upper_bound(grid.begin(), grid.end(), v);
                std::size_t k = static_cast<std::size_t>(it - grid.begin());
                if (k == 0) k = 1;
                if (k >= grid.size()) k = grid.size() - 1;
                return k - 1;
            };
            return table_[idx(xs_, x)][idx(ys_, y)];
        }
        case Kind::Callback: {
            const double v = fn_(x, y);
            if (!std::isfinite(v)) throw DomainError("callback graphon: non-finite value");
            return v;
        }
    }
    return 0.0;
}

double Graphon::cell_average(int n, int i, int j) const {
    double x0, x1, y0, y1;
    cell_bounds(n, i, j, x0, x1, y0, y1);
    switch (kind_) {
        case Kind::Constant:
            return p_;
        case Kind::Rank1:
            return h1_.cell_average(n, i) * h2_.cell_average(n, j);
        case Kind::NearestNeighbor:
            return band_area(x0, x1, y0, y1, kappa_) * n * n;
        case Kind::PiecewiseTable: {
            double sum = 0.0;
            for (std::size_t a = 0; a + 1 < xs_.size(); ++a) {
                const double ox = std::min(x1, xs_[a + 1]) - std::max(x0, xs_[a]);
                if (ox <= 0.0) continue;
                for (std::size_t b = 0; b + 1 < ys_.size(); ++b) {
                    const double oy = std::min(y1, ys_[b + 1]) - std::max(y0, ys_[b]);
                    if (oy <= 0.0) continue;
                    sum += table_[a][b] * ox * oy;
                }
            }
            return sum * n * n;
        }
        case Kind::Callback:
            return quad_cell_average(n, i, j, std::numeric_limits<double>::infinity());
    }
    return 0.0;
}

double Graphon::truncated_cell_average(int n, int i, int j, double cap) const {
    if (!(cap > 0.0)) throw DomainError("truncated_cell_average: cap must be positive");
    double x0, x1, y0, y1;
    cell_bounds(n, i, j, x0, x1, y0, y1);
    switch (kind_) {
        case Kind::Constant:
            return std::min(cap, p_);
        case Kind::NearestNeighbor:
            // {0,1}-valued: the clamp scales the band value only
            return std::min(cap, 1.0) * band_area(x0, x1, y0, y1, kappa_) * n * n;
        case Kind::PiecewiseTable: {
            double sum = 0.0;
            for (std::size_t a = 0; a + 1 < xs_.size(); ++a) {
                const double ox = std::min(x1, xs_[a + 1]) - std::max(x0, xs_[a]);
                if (ox <= 0.0) continue;
                for (std::size_t b = 0; b + 1 < ys_.size(); ++b) {
                    const double oy = std::min(y1, ys_[b + 1]) - std::max(y0, ys_[b]);
                    if (oy <= 0.0) continue;
                    sum += std::min(cap, table_[a][b]) * ox * oy;
                }
            }
            return sum * n * n;
        }
        case Kind::Rank1: {
            double mn1, mx1, mn2, mx2;
            profile_range_on(h1_, x0, x1, mn1, mx1);
            profile_range_on(h2_, y0, y1, mn2, mx2);
            const double products[4] = {mn1 * mn2, mn1 * mx2, mx1 * mn2, mx1 * mx2};
            const double pmax = *std::max_element(products, products + 4);
            const double pmin = *std::min_element(products, products + 4);
            if (pmax <= cap) return cell_average(n, i, j);
            if (pmin >= cap) return cap;
            return quad_cell_average(n, i, j, cap); // clamp active inside the cell
        }
        case Kind::Callback:
            return quad_cell_average(n, i, j, cap);
    }
    return 0.0;
}

double Graphon::quad_cell_average(int n, int i, int j, double cap) const {
    double x0, x1, y0, y1;
    cell_bounds(n, i, j, x0, x1, y0, y1);
    auto inner = [&](double x) {
        auto fy = [&](double y) { return std::min(cap, evaluate(x, y)); };
        return gl_integrate_split(fy, y0, y1, y_breaks_, quad_points_);
    };
    const double integral = gl_integrate_split(inner, x0, x1, x_breaks_, quad_points_);
    return integral * n * n;
}

const ScalarProfile& Graphon::factor1() const {
    if (kind_ != Kind::Rank1) throw DomainError("factor1: graphon is not rank-1");
    return h1_;
}

const ScalarProfile& Graphon::factor2() const {
    if (kind_ != Kind::Rank1) throw DomainError("factor2: graphon is not rank-1");
    return h2_;
}

double Graphon::nn_kappa() const {
    if (kind_ != Kind::NearestNeighbor) throw DomainError("nn_kappa: wrong kind");
    return kappa_;
}

double Graphon::constant_value() const {
    if (kind_ != Kind::Constant) throw DomainError("constant_value: wrong kind");
    return p_;
}

double Graphon::numeric_row_bound(int axis, int nx, int ny) const {
    // sup over the outer variable of ∫ |W| in the inner variable
    const std::vector<double>& outer_breaks = axis == 0 ? x_breaks_ : y_breaks_;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(nx) + 2 * outer_breaks.size() + 2);
    for (int k = 0; k < nx; ++k) samples.push_back((k + 0.5) / nx);
    samples.push_back(0.0);
    samples.push_back(1.0);
    for (double b : outer_breaks) {
        samples.push_back(b);
        samples.push_back(std::max(0.0, b - 1e-13));
    }

    const int order = std::min(64, std::max(16, ny / 16));
    double sup = 0.0;
    for (double s : samples) {
        std::vector<double> inner_breaks = axis == 0 ? y_breaks_ : x_breaks_;
        if (kind_ == Kind::NearestNeighbor) {
            for (double d : {s - kappa_, s + kappa_, s - (1.0 - kappa_), s + (1.0 - kappa_)})
                if (d > 0.0 && d < 1.0) inner_breaks.push_back(d);
        }
        if (kind_ == Kind::Rank1) {
            // |W| has kinks at the inner factor's sign changes
            const auto& inner = axis == 0 ? h2_ : h1_;
            for (double z : inner.zero_crossings()) inner_breaks.push_back(z);
        }
        auto f = [&](double t) { return std::abs(axis == 0 ? evaluate(s, t) : evaluate(t, s)); };
        sup = std::max(sup, gl_integrate_split(f, 0.0, 1.0, inner_breaks, order));
    }
    return sup;
}

double Graphon::numeric_l2_norm(int nx, int ny) const {
    const int order_y = std::min(64, std::max(16, ny / 8));
    auto inner = [&](double x) {
        std::vector<double> inner_breaks = y_breaks_;
        if (kind_ == Kind::NearestNeighbor) {
            for (double d : {x - kappa_, x + kappa_, x - (1.0 - kappa_), x + (1.0 - kappa_)})
                if (d > 0.0 && d < 1.0) inner_breaks.push_back(d);
        }
        auto f = [&](double y) {
            double v = evaluate(x, y);
            return v * v;
        };
        return gl_integrate_split(f, 0.0, 1.0, inner_breaks, order_y);
    };
    // composite in x: split at breakpoints, fixed rule per piece
    double total = 0.0;
    std::vector<double> cuts{0.0};
    for (double b : x_breaks_)
        if (b > 0.0 && b < 1.0) cuts.push_back(b);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const int pieces = std::max(1, static_cast<int>((cuts[k + 1] - cuts[k]) * nx / 16));
        for (int p = 0; p < pieces; ++p) {
            const double a = cuts[k] + (cuts[k + 1] - cuts[k]) * p / pieces;
            const double b = cuts[k] + (cuts[k + 1] - cuts[k]) * (p + 1) / pieces;
            total += gl_integrate(inner, a, b, 16);
        }
    }
    return std::sqrt(total);
}

std::pair<Graphon, Graphon> split_signed(const Graphon& w) {
    auto plus = [w](double x, double y) { return std::max(0.0, w.evaluate(x, y)); };
    auto minus = [w](double x, double y) { return std::max(0.0, -w.evaluate(x, y)); };
    const bool r01 = w.range_in_unit_interval();
    Graphon wp = Graphon::callback(plus, w.c1_bound(), w.c2_bound(), w.l2_norm(), true, r01,
                                   w.symmetric(), w.x_breakpoints(), w.y_breakpoints());
    Graphon wm = Graphon::callback(minus, w.c1_bound(), w.c2_bound(), w.l2_norm(), true, r01,
                                   w.symmetric(), w.x_breakpoints(), w.y_breakpoints());
    return {std::move(wp), std::move(wm)};
}

} // namespace oscnet
