#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oscnet/analysis.hpp"
#include "oscnet/continuum.hpp"
#include "oscnet/errors.hpp"

using namespace oscnet;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// single-layer all-to-all sine system with omega(x) = a(x - 1/2)
ContinuumSystem simple_system(double a, double p, ScalarProfile g) {
    ContinuumSystem sys;
    sys.layers = {ContinuumLayer{Graphon::constant(p), CouplingFunction::sine()}};
    sys.omega = ScalarProfile::linear(a);
    sys.g = std::move(g);
    return sys;
}

} // namespace

TEST_CASE("picard step bound") {
    ContinuumSystem sys;
    sys.layers = {ContinuumLayer{Graphon::constant(1.0), CouplingFunction::sine()}};
    sys.g = ScalarProfile::constant(0.0);
    CHECK(picard_step_bound(sys) == Approx(0.25).margin(1e-15));

    sys.intrinsic = IntrinsicTerm::feedback(0.506, kPi / 6.0);
    CHECK(picard_step_bound(sys) == Approx(1.0 / (2.0 * (0.506 + 2.0))).margin(1e-12));
    CHECK(picard_step_bound(sys) == Approx(0.19952114924181963).margin(1e-12));

    // only a constant-one layer and no intrinsic term: degenerate contraction
    ContinuumSystem flat;
    flat.layers = {ContinuumLayer{Graphon::constant(1.0), CouplingFunction::constant_one()}};
    flat.g = ScalarProfile::constant(0.0);
    CHECK(picard_step_bound(flat) == Approx(10.0));
}

TEST_CASE("picard solution of decoupled dynamics stays at the initial data") {
    ContinuumSystem sys;
    sys.layers = {ContinuumLayer{Graphon::constant(0.0), CouplingFunction::sine()}};
    sys.g = ScalarProfile::linear(1.0);
    const auto tr = solve_continuum_picard(sys, 1.0, 64, 1e-12);
    const auto mid = mesh_midpoints(64);
    for (const auto& state : tr.states)
        for (int i = 0; i < 64; ++i) CHECK(state[i] == Approx(sys.g(mid[i])).margin(1e-13));
}

TEST_CASE("synchronized profile is stationary under the picard solver") {
    const double a = 1.0, p = 1.0;
    const auto sol = solve_order_parameter_general(
        Graphon::rank1(ScalarProfile::constant(p), ScalarProfile::constant(1.0)),
        ScalarProfile::linear(a));
    REQUIRE(sol.exists);
    ContinuumSystem sys = simple_system(
        a, p, ScalarProfile::callback([sol](double x) { return sol.profile(x); }));

    const int n_mesh = 1024;
    const auto tr = solve_continuum_picard(sys, 1.0, n_mesh, 1e-12);
    const double drift = l2_distance(tr.states.front(), tr.states.back(), false);
    CHECK(drift < 1e-6); // per unit time
}

TEST_CASE("picard iterates contract within each window") {
    ContinuumSystem sys = simple_system(1.0, 1.0, ScalarProfile::linear(1.0));
    PicardReport report;
    solve_continuum_picard(sys, 1.0, 128, 1e-10, {}, &report);
    CHECK(report.window_starts.size() == 4); // T = 1/4
    CHECK(report.max_contraction_ratio <= 0.55);
    CHECK(report.max_contraction_ratio > 0.0);
}

TEST_CASE("picard detects non-contraction on oversized windows") {
    ContinuumSystem sys = simple_system(1.0, 1.0, ScalarProfile::linear(1.0));
    PicardOptions opts;
    opts.window_override = 40.0; // far beyond the contraction bound
    opts.inner_intervals = 128;
    CHECK_THROWS_AS(solve_continuum_picard(sys, 40.0, 64, 1e-10, opts), ContractionError);
}

TEST_CASE("collocation equals the dense discrete integration bitwise") {
    ContinuumSystem sys = simple_system(1.0, 1.0, ScalarProfile::linear(1.0));
    const int n_mesh = 32;
    const auto tr = solve_continuum_collocation(sys, 0.5, 0.01, n_mesh, 10);

    const DiscreteSystem d = discretize_dense(sys, n_mesh);
    PhaseState init{0.0, sys.g.cell_averages(n_mesh)};
    const auto ref = integrate(d, init, 0.5, 0.01, 10);
    REQUIRE(tr.times.size() == ref.times.size());
    for (std::size_t k = 0; k < tr.states.size(); ++k)
        for (int i = 0; i < n_mesh; ++i) REQUIRE(tr.states[k][i] == ref.states[k][i]);
}

TEST_CASE("picard and collocation cross-validate on a coarse mesh") {
    ContinuumSystem sys = simple_system(1.0, 1.0, ScalarProfile::linear(1.0));
    const int n_mesh = 64;
    const auto pic = solve_continuum_picard(sys, 1.0, n_mesh, 1e-10);
    const auto col = solve_continuum_collocation(sys, 1.0, 1.0 / 256.0, n_mesh, 256);
    CHECK(l2_distance(pic.states.back(), col.states.back(), false) < 1e-3);
}

TEST_CASE("mesh refinement error decreases at first order") {
    ContinuumSystem sys = simple_system(1.0, 1.0, ScalarProfile::linear(1.0));
    const double t_end = 2.0, dt = 0.005;
    const auto ref = solve_continuum_collocation(sys, t_end, dt, 1024, 1000);
    const auto c128 = solve_continuum_collocation(sys, t_end, dt, 128, 1000);
    const auto c256 = solve_continuum_collocation(sys, t_end, dt, 256, 1000);
    const double e128 = l2_distance(c128.states.back(), ref.states.back(), false);
    const double e256 = l2_distance(c256.states.back(), ref.states.back(), false);
    CHECK(e128 / e256 >= 1.8);
}

TEST_CASE("ring-pair mode growth matches the spectrum prediction") {
    // two layers: all-to-all sine + ring double-sine with gain K
    const double kappa = 1.0 / 3.0, gain = -0.7;
    ContinuumSystem sys;
    sys.layers = {ContinuumLayer{Graphon::constant(1.0), CouplingFunction::sine()},
                  ContinuumLayer{Graphon::nearest_neighbor(kappa),
                                 CouplingFunction::scaled(gain, CouplingFunction::double_sine())}};
    sys.g = ScalarProfile::callback([](double x) { return 1e-3 * std::sin(4.0 * kPi * x); });

    const int n_mesh = 256;
    const double t_end = 5.0;
    const auto tr = solve_continuum_collocation(sys, t_end, 0.01, n_mesh, 100);

    auto mode2 = [&](const std::vector<double>& u) {
        double re = 0.0, im = 0.0;
        for (int j = 0; j < n_mesh; ++j) {
            const double ang = 4.0 * kPi * (j + 0.5) / n_mesh;
            re += u[j] * std::cos(ang);
            im += u[j] * std::sin(ang);
        }
        return std::sqrt(re * re + im * im) / n_mesh;
    };
    const double a0 = mode2(tr.states.front());
    const double a1 = mode2(tr.states.back());
    const double rate = std::log(a1 / a0) / t_end;
    const double lambda = ring_pair_eigenvalue(gain, kappa, 2);
    CHECK(rate == Approx(lambda).epsilon(0.10));
}

TEST_CASE("l2 distances") {
    const std::vector<double> a = {0.1, 0.4, -0.3, 0.8};
    CHECK(l2_distance(a, a, false) == 0.0);
    CHECK(l2_distance(a, a, true) == Approx(0.0).margin(1e-12));

    std::vector<double> shifted(a);
    for (double& v : shifted) v += 0.7;
    CHECK(l2_distance(a, shifted, true) == Approx(0.0).margin(1e-10));
    CHECK(l2_distance(a, shifted, false) == Approx(0.7).margin(1e-12));

    const std::vector<double> z = {0.0, 0.0};
    const std::vector<double> pm = {kPi / 2.0, -kPi / 2.0};
    CHECK(l2_distance(z, pm, false) == Approx(kPi / 2.0).margin(1e-15));

    // nested prolongation: a step function against its refinement
    const std::vector<double> coarse = {1.0, -1.0};
    const std::vector<double> fine = {1.0, 1.0, 1.0, -1.0, -1.0, -1.0};
    CHECK(l2_distance(coarse, fine, false) == 0.0);
    const std::vector<double> bad = {1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK_THROWS_AS(l2_distance(coarse, bad, false), DomainError);

    // the rotation quotient never exceeds the plain distance
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(16), y(16);
        for (int i = 0; i < 16; ++i) {
            x[i] = std::sin(0.37 * (trial + 1) * (i + 1));
            y[i] = std::cos(0.53 * (trial + 2) * (i + 3));
        }
        CHECK(l2_distance(x, y, true) <= l2_distance(x, y, false) + 1e-12);
    }
}

TEST_CASE("mesh function norm identity") {
    MeshFunction f{4, {3.0, 4.0, 0.0, 1.0}};
    CHECK(discrete_l2_norm(f.values) ==
          Approx(std::sqrt((9.0 + 16.0 + 0.0 + 1.0) / 4.0)).margin(1e-15));
}
