#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscnet/network.hpp"
#include "oscnet/profile.hpp"

namespace oscnet {

/// Intrinsic per-node term f(u, t).
class IntrinsicTerm {
public:
    static IntrinsicTerm zero();
    /// f(u, t) = b * sin(ubar - u)
    static IntrinsicTerm feedback(double b, double ubar);
    static IntrinsicTerm callback(std::function<double(double, double)> f, double lipschitz);

    double operator()(double u, double t) const;
    double lipschitz() const { return lipschitz_; }
    bool is_zero() const { return kind_ == Kind::Zero; }

private:
    enum class Kind { Zero, Feedback, Callback };
    Kind kind_ = Kind::Zero;
    double b_ = 0.0, ubar_ = 0.0;
    std::function<double(double, double)> fn_;
    double lipschitz_ = 0.0;
};

/// One realized layer of the discrete model: weights, coupling function and
/// (optionally) the recipe it was sampled from, which the averaged model needs.
struct DynamicLayer {
    WeightMatrix matrix;
    CouplingFunction coupling = CouplingFunction::sine();
    std::optional<GraphLayer> provenance;
};

struct PhaseState {
    double t = 0.0;
    std::vector<double> u;
};

class DiscreteSystem {
public:
    DiscreteSystem(int n, std::vector<DynamicLayer> layers,
                   IntrinsicTerm intrinsic = IntrinsicTerm::zero(),
                   std::optional<std::vector<double>> frequencies = {});

    int n() const { return n_; }
    const std::vector<DynamicLayer>& layers() const { return layers_; }
    const IntrinsicTerm& intrinsic() const { return intrinsic_; }
    const std::optional<std::vector<double>>& frequencies() const { return freqs_; }

private:
    int n_;
    std::vector<DynamicLayer> layers_;
    IntrinsicTerm intrinsic_;
    std::optional<std::vector<double>> freqs_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    double dt = 0.0;
    int sample_every = 1;
    std::string integrator = "rk4";

    const std::vector<double>& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

/// Evaluates du/dt for a fixed system, reusing scratch buffers across calls.
/// For sine-family couplings the pairwise sum is factored through
/// sin(c(u_j - u_i)) = sin(c u_j) cos(c u_i) - cos(c u_j) sin(c u_i), turning
/// each layer into two weighted sums per row; `use_factored_path(false)`
/// switches to the per-edge reference evaluation (both agree to ~1e-13).
class RhsEvaluator {
public:
    explicit RhsEvaluator(const DiscreteSystem& sys, int threads = 1);

    void operator()(const std::vector<double>& u, double t, std::vector<double>& dudt);
    void use_factored_path(bool on) { factored_ = on; }

private:
    const DiscreteSystem& sys_;
    int threads_;
    bool factored_ = true;
    std::vector<double> sinv_, cosv_, ya_, yb_;
    std::vector<std::vector<double>> row_sums_; // per constant-coupling layer
};

/// du/dt at one state (convenience wrapper; throws DomainError on size mismatch).
std::vector<double> rhs_discrete(const DiscreteSystem& sys, const PhaseState& state);

/// The same system with every random layer replaced by its expectation
/// weights <min(alpha^-1, W)>^n_ij at coefficient 1/n. Deterministic layers
/// pass through unchanged. Throws DomainError when a random layer lacks
/// graphon provenance.
DiscreteSystem averaged_system(const DiscreteSystem& sys);

/// du/dt of the averaged model at one state.
std::vector<double> rhs_averaged(const DiscreteSystem& sys, const PhaseState& state);

/// Classical fixed-step RK4 from initial.t to t_end. States are recorded
/// every sample_every steps plus the final state. Throws IntegrationError at
/// the first non-finite component.
Trajectory integrate(const DiscreteSystem& sys, const PhaseState& initial, double t_end,
                     double dt, int sample_every = 1, int threads = 1);

/// u_i(0) = n ∫_{I_i^n} g  (cell averages of the initial profile).
PhaseState initial_from_profile(const ScalarProfile& g, int n);

/// ||u||_{2,n} = (n^-1 sum u_i^2)^(1/2); equals the L2(I) norm of the step
/// embedding of u.
double discrete_l2_norm(std::span<const double> u);

} // namespace oscnet
