#pragma once

#include <optional>
#include <vector>

#include "oscnet/dynamics.hpp"
#include "oscnet/graphon.hpp"

namespace oscnet {

/// Step function on [0,1]: values at the midpoints of the uniform n-cell
/// partition. Its L2 norm is the discrete norm of the value vector.
struct MeshFunction {
    int n_mesh = 0;
    std::vector<double> values;
};

struct ContinuumLayer {
    Graphon graphon = Graphon::constant(0.0);
    CouplingFunction coupling = CouplingFunction::sine();
};

/// The mean-field system: du/dt = f(u,t) + omega(x) + sum_k ∫ W_k(x,y) D_k(u(y)-u(x)) dy.
struct ContinuumSystem {
    std::vector<ContinuumLayer> layers;
    IntrinsicTerm intrinsic = IntrinsicTerm::zero();
    std::optional<ScalarProfile> omega;
    ScalarProfile g;
};

struct PicardOptions {
    int inner_intervals = 64;   // trapezoid subintervals per window
    int max_iterations = 200;
    double window_cap = 10.0;   // used when all Lipschitz constants vanish
    int sample_stride = 8;      // record every k-th inner node
    double window_override = 0.0; // > 0 forces the window length (testing)
};

/// Contraction window length T = (2 (L_f + m L_D (C2 + ||W||_L2)))^-1 with
/// L_D = max_k Lip(D_k) and C2, ||W|| the maxima over layers; capped at
/// PicardOptions::window_cap when the denominator vanishes.
double picard_step_bound(const ContinuumSystem& sys);

struct PicardReport {
    std::vector<double> window_starts;
    std::vector<int> iterations;
    double max_contraction_ratio = 0.0; // over ratios past the first iterate
};

/// Fixed-point iteration u <- g + ∫_0^t RHS(u) ds on windows of length at
/// most picard_step_bound, chained to t_end. Space integrals use midpoint
/// values of the kernels on the mesh; time integrals composite trapezoid on
/// the inner grid. Stops a window when successive iterates differ by < tol in
/// sup-over-time discrete L2; throws ContractionError if the iterate distance
/// grows for 3 consecutive iterations.
Trajectory solve_continuum_picard(const ContinuumSystem& sys, double t_end, int n_mesh,
                                  double tol, const PicardOptions& opts = {},
                                  PicardReport* report = nullptr);

/// The deterministic-dense discretization of the same system at resolution
/// n_mesh (cell-averaged kernels, omega and g), integrated with RK4. The
/// trajectory is bitwise the one `integrate` produces for that system.
Trajectory solve_continuum_collocation(const ContinuumSystem& sys, double t_end, double dt,
                                       int n_mesh, int sample_every = 1, int threads = 1);

/// Build the dense n-node discrete system the collocation solver integrates.
DiscreteSystem discretize_dense(const ContinuumSystem& sys, int n_mesh);

/// L2 distance of the step embeddings. Sizes must match or be exact integer
/// multiples (the coarser function is prolonged exactly); anything else is a
/// DomainError. With mod_rotation the minimum over a constant circular shift
/// theta is returned (circular mean plus fixed-point refinement).
double l2_distance(std::span<const double> a, std::span<const double> b, bool mod_rotation = false);
double l2_distance(const MeshFunction& a, const MeshFunction& b, bool mod_rotation = false);

/// Midpoint coordinates (2i-1)/2n, i = 1..n.
std::vector<double> mesh_midpoints(int n);

} // namespace oscnet
