#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "oscnet/profile.hpp"

namespace oscnet {

/// An evaluable kernel W(x, y) on [0,1]^2 with the bound constants the
/// existence/convergence estimates consume:
///   c1_bound  >= ess sup_y ∫ |W(x,y)| dx
///   c2_bound  >= ess sup_x ∫ |W(x,y)| dy
///   l2_norm   >= ||W||_{L2(I^2)}
/// Bounds are exact for built-in kinds and validated numerically for
/// user-supplied callbacks at construction time.
class Graphon {
public:
    enum class Kind { Constant, Rank1, NearestNeighbor, PiecewiseTable, Callback };

    static Graphon constant(double p);
    /// W(x,y) = h1(x) * h2(y).
    static Graphon rank1(ScalarProfile h1, ScalarProfile h2);
    /// 1 when |x-y| <= kappa or |x-y| >= 1-kappa, else 0; kappa in (0, 1/2].
    static Graphon nearest_neighbor(double kappa);
    /// Constant value[i][j] on [xs[i],xs[i+1]) x [ys[j],ys[j+1]).
    static Graphon piecewise_table(std::vector<double> xs, std::vector<double> ys,
                                   std::vector<std::vector<double>> values);
    /// Arbitrary kernel; all bound constants must be declared by the caller
    /// and are checked on a sample grid (throws ConstructionError on failure).
    static Graphon callback(std::function<double(double, double)> f,
                            double c1_bound, double c2_bound, double l2_norm,
                            bool nonnegative, bool range_in_unit_interval,
                            bool symmetric = false,
                            std::vector<double> x_breakpoints = {},
                            std::vector<double> y_breakpoints = {},
                            int quad_points = 32);

    Kind kind() const { return kind_; }
    std::string kind_name() const;

    /// W(x, y); throws DomainError off [0,1]^2.
    double evaluate(double x, double y) const;

    /// <W>_{ij}^n = n^2 ∫∫_{I_i x I_j} W dx dy, i,j in 1..n. Exact for
    /// constant / nearest-neighbor / table / rank1-with-exact-factors.
    double cell_average(int n, int i, int j) const;

    /// Cell average of min(cap, W); exact where the clamp can be resolved
    /// analytically, tensor quadrature otherwise. cap > 0.
    double truncated_cell_average(int n, int i, int j, double cap) const;

    double c1_bound() const { return c1_; }
    double c2_bound() const { return c2_; }
    double l2_norm() const { return l2_; }
    bool nonnegative() const { return nonnegative_; }
    bool range_in_unit_interval() const { return range01_; }
    bool symmetric() const { return symmetric_; }

    /// Rank-1 factors (DomainError for other kinds).
    const ScalarProfile& factor1() const;
    const ScalarProfile& factor2() const;
    double nn_kappa() const;
    double constant_value() const;

    /// Known kink/jump locations along each axis (used for quadrature splits
    /// and for bound validation grids).
    const std::vector<double>& x_breakpoints() const { return x_breaks_; }
    const std::vector<double>& y_breakpoints() const { return y_breaks_; }

    /// Numerically recompute sup_x ∫|W(x,y)|dy (axis=0) or sup_y ∫|W|dx
    /// (axis=1) on an nx-point grid (plus breakpoints) with ny-point
    /// quadrature in the integrated variable.
    double numeric_row_bound(int axis, int nx = 1024, int ny = 4096) const;
    /// Numeric ||W||_{L2(I^2)} on a tensor quadrature grid.
    double numeric_l2_norm(int nx = 512, int ny = 512) const;

private:
    Graphon() = default;

    Kind kind_ = Kind::Constant;
    double p_ = 0.0;               // Constant
    double kappa_ = 0.0;           // NearestNeighbor
    ScalarProfile h1_, h2_;        // Rank1
    std::vector<double> xs_, ys_;  // PiecewiseTable grid
    std::vector<std::vector<double>> table_;
    std::function<double(double, double)> fn_; // Callback
    int quad_points_ = 32;

    double c1_ = 0.0, c2_ = 0.0, l2_ = 0.0;
    bool nonnegative_ = false, range01_ = false, symmetric_ = false;
    std::vector<double> x_breaks_, y_breaks_;

    double quad_cell_average(int n, int i, int j, double cap) const;
};

/// Split a signed kernel into nonnegative parts (W+, W-) with W = W+ - W-.
/// Both parts inherit the original bound constants (valid upper bounds).
std::pair<Graphon, Graphon> split_signed(const Graphon& w);

} // namespace oscnet
