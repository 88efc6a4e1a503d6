#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oscnet/continuum.hpp"
#include "oscnet/dynamics.hpp"
#include "oscnet/graphon.hpp"
#include "oscnet/profile.hpp"

namespace oscnet {

enum class Stability {
    StableCertified,
    AsymptoticallyStableCertified,
    UnstableCertified,
    Undetermined,
};

std::string stability_name(Stability s);

/// A synchronized profile u(t,x) = Omega t + U(x) + theta with its order
/// parameter and (when a check has run) a stability verdict.
struct SyncSolution {
    bool exists = false;
    double omega_cap = 0.0;   // collective frequency Omega
    double order_param = 0.0; // C (largest root when several exist)
    std::vector<double> all_roots;
    double theta = 0.0;       // free rotation constant, reported separately
    Stability stability = Stability::Undetermined;
    std::string certificate;  // which sufficient condition fired

    // data needed to evaluate U(x) = arcsin((omega(x) - Omega) / (C h1(x)))
    ScalarProfile h1, h2, omega_profile;

    double profile(double x) const;
    /// U at the n cell midpoints.
    std::vector<double> profile_on_mesh(int n) const;
    /// sup_x |U(x)| (grid + breakpoints).
    double profile_sup_abs() const;
};

// ---------------------------------------------------------------------------
// Order parameters
// ---------------------------------------------------------------------------

/// phi(eta) = arcsin(eta) + eta sqrt(1 - eta^2); strictly increasing on (0,1),
/// phi(1) = pi/2.
double phi_order(double eta);

struct SimpleOrderParameter {
    bool exists = false;
    double eta = 0.0; // a / (2 p C)
    double order_param_for(double a, double p) const { return a / (2.0 * p * eta); }
};

/// Solve phi(eta) = a/p for eta in (0, 1] by bisection (tolerance 1e-12 on
/// the residual into the bracket width). Solutions exist iff a/p in (0, pi/2].
SimpleOrderParameter solve_order_parameter_simple(double a_over_p);

/// Stability certification boundary of the single-layer constant-kernel
/// family: phi(1/sqrt(2)) = pi/4 + 1/2.
double simple_stability_boundary();

/// Self-consistent synchronized solution for a rank-1 kernel W = H1 H2 with
/// H1 > 0 on I: Omega = ∫ H2 w / H1 / ∫ H2 / H1, then C = ∫ H2 cos U by
/// damped fixed-point iteration (damping 0.5, seeded random restarts) plus a
/// bracket scan; all roots are reported and the largest is returned.
SyncSolution solve_order_parameter_general(const Graphon& w, const ScalarProfile& omega);

struct DiscreteSyncProfile {
    bool exists = false;
    double omega_cap = 0.0; // Omega_D
    double order_param = 0.0; // C_D
    std::vector<double> profile; // U_i
    std::vector<double> all_roots;
};

/// Discrete self-consistency on the n-node dense rank-1 system:
/// U_i = arcsin((w_i - Omega_D) / (C_D h1_i)).
DiscreteSyncProfile sync_profile_discrete(const DiscreteSystem& sys,
                                          const SyncSolution& hint);

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

/// Certify the continuum solution via the sufficient conditions:
/// sup|U| <= pi/4 and W >= 0 gives linear stability; additionally H2 >= 0 and
/// ∫ H2 (1/cos U - 2 cos U) != 0 gives asymptotic stability of the rotation
/// family. Never claims instability. Returns the solution with the verdict set.
SyncSolution continuum_stability_check(SyncSolution solution, const Graphon& w);

struct GershgorinDisc {
    double center = 0.0;
    double radius = 0.0;
};

struct SpectrumReport {
    bool gershgorin_certified = false; // no disc reaches the open right half-plane
    double max_disc_reach = 0.0;       // max_i (center_i + radius_i)
    std::vector<GershgorinDisc> discs;
    bool profile_within_quarter_pi = false; // |U_i| <= pi/4 for all i
    bool kernel_test_available = false;     // rank-1 factors known
    double kernel_test_value = 0.0;    // sum h2_i (1/cos U_i - 2 cos U_i)
    bool kernel_dimension_one = false; // kernel test nonzero
    bool eigenvalues_computed = false; // n <= 512
    std::vector<std::complex<double>> eigenvalues;
    double max_real_eigenvalue = 0.0;
    int numeric_kernel_dimension = 0;  // eigenvalues with |lambda| < 1e-8
    Stability verdict = Stability::Undetermined;
};

/// Assemble the Jacobian of the single dense layer at the synchronized
/// profile, report Gershgorin discs, the kernel-dimension test, and (n <= 512)
/// the numerically computed spectrum.
SpectrumReport discrete_stability_check(const DiscreteSystem& sys,
                                        const std::vector<double>& profile);

// ---------------------------------------------------------------------------
// Two-layer all-to-all + nearest-neighbor-ring model
// ---------------------------------------------------------------------------

/// Eigenvalue of the linearization about the constant state for spatial mode
/// l >= 1: lambda = (2K / (pi l)) sin(2 pi l kappa) - (1 + 4 K kappa).
double ring_pair_eigenvalue(double k_gain, double kappa, int l);

struct RingPairBoundary {
    int l = 0;
    double neg_kappa_k = 0.0; // critical value of -kappa*K
    double k_critical = 0.0;  // the equivalent critical K (< 0)
};

/// Instability boundary for mode l: -kappa K > pi l kappa / (2 (2 pi l kappa - sin 2 pi l kappa)).
RingPairBoundary ring_pair_boundary(double kappa, int l);

/// The weakest (smallest |K|) boundary over l = 1..l_max.
RingPairBoundary ring_pair_weakest_boundary(double kappa, int l_max = 10);

// ---------------------------------------------------------------------------
// Inverse design
// ---------------------------------------------------------------------------

struct DesignResult {
    bool cond_sign_sets = false;   // (i) I+/I- nonempty with the right sin U0 signs
    bool cond_aligned = false;     // (ii) (omega - Omega0) sin U0 >= 0
    bool cond_zero_match = false;  // (iii) omega = Omega0 wherever sin U0 = 0
    double h2_plus = 0.0, h2_minus = 0.0, c0 = 0.0;
    ScalarProfile h1, h2;
    Graphon kernel;                // rank1(h1, h2)

    DesignResult() : kernel(Graphon::constant(0.0)) {}
};

/// Determine a rank-1 kernel making Omega0 t + U0(x) + theta a synchronized
/// solution for the given frequency profile:
///   H1 = (omega - Omega0) / (C0 sin U0) where sin U0 != 0 (else 0),
///   H2 = H2+ on I+, H2- on I-, 0 elsewhere,
/// with H2+ = -∫_{I-} sin U0, H2- = ∫_{I+} sin U0 and
/// C0 = H2- ∫_{I-} cos U0 + H2+ ∫_{I+} cos U0. Throws InfeasibleError naming
/// the violated precondition and a witness point.
DesignResult inverse_design(const ScalarProfile& u0, const ScalarProfile& omega,
                            double omega0,
                            const std::vector<std::pair<double, double>>& i_plus,
                            const std::vector<std::pair<double, double>>& i_minus);

// ---------------------------------------------------------------------------
// Feedback-controlled all-to-all model
// ---------------------------------------------------------------------------

struct ControlledOrderParameter {
    bool exists = false;
    double eta = 0.0;   // a / (2C), in (0, 1/sqrt(2)]
    double b_min = 0.0; // (4a - 2 - pi) / (4 sqrt(2))
    double residual = 0.0;
};

/// Solve phi(eta) + 2 b eta = a on (0, 1/sqrt(2)]; a solution exists iff
/// b >= b_min(a).
ControlledOrderParameter controlled_order_parameter(double a, double b);

// ---------------------------------------------------------------------------
// Convergence metric
// ---------------------------------------------------------------------------

/// Shift-removed discrepancy between a final state and a target profile
/// sampled at cell midpoints: the variance of the residuals. Residuals are
/// wrapped about their circular mean before taking moments (exactly shift
/// invariant); raw = true uses the literal unwrapped variance.
double delta_n(std::span<const double> u_final, const std::function<double(double)>& profile,
               bool raw = false);
double delta_n(std::span<const double> u_final, std::span<const double> profile_values,
               bool raw = false);

/// Dominant nonzero spatial Fourier mode of a node vector (index l in
/// 1..n/2 maximizing |sum_j u_j e^{-2 pi i l j / n}| after mean removal).
int dominant_fourier_mode(std::span<const double> u);

} // namespace oscnet
