#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oscnet/dynamics.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/network.hpp"
#include "oscnet/rng.hpp"

using namespace oscnet;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

DiscreteSystem dense_kuramoto(int n, double p, double a) {
    auto layer = GraphLayer::deterministic_dense(Graphon::constant(p), CouplingFunction::sine());
    WeightMatrix wm = build_deterministic_dense(layer, n);
    std::optional<std::vector<double>> freqs;
    if (a != 0.0) freqs = ScalarProfile::linear(a).cell_averages(n);
    return DiscreteSystem(n, {DynamicLayer{std::move(wm), layer.coupling, layer}},
                          IntrinsicTerm::zero(), std::move(freqs));
}

std::vector<double> random_phases(int n, std::uint64_t seed, double lo = -kPi, double hi = kPi) {
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = node_uniform(seed, i, lo, hi);
    return u;
}

} // namespace

TEST_CASE("rhs of the all-to-all sine system") {
    auto sys = dense_kuramoto(2, 1.0, 0.0);

    PhaseState sync{0.0, {0.0, 0.0}};
    for (double v : rhs_discrete(sys, sync)) CHECK(v == 0.0);

    PhaseState split{0.0, {0.0, kPi / 2.0}};
    const auto dudt = rhs_discrete(sys, split);
    CHECK(dudt[0] == Approx(0.5).margin(1e-15));
    CHECK(dudt[1] == Approx(-0.5).margin(1e-15));

    PhaseState bad{0.0, {0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(rhs_discrete(sys, bad), DomainError);
}

TEST_CASE("two-layer ring system vanishes at constant states") {
    const int n = 12;
    auto complete = GraphLayer::deterministic_dense(Graphon::constant(1.0), CouplingFunction::sine(), 1);
    auto ring = GraphLayer::deterministic_dense(Graphon::nearest_neighbor(1.0 / 3.0),
                                                CouplingFunction::scaled(-0.7, CouplingFunction::double_sine()), 2);
    DiscreteSystem sys(n,
                       {DynamicLayer{build_deterministic_dense(complete, n), complete.coupling, complete},
                        DynamicLayer{build_deterministic_dense(ring, n), ring.coupling, ring}});
    PhaseState q{0.0, std::vector<double>(n, 1.234)};
    for (double v : rhs_discrete(sys, q)) CHECK(v == Approx(0.0).margin(1e-15));
}

TEST_CASE("frequency layer via constant-one coupling matches the frequency vector") {
    // omega as an extra layer with D = 1 and w_ij = omega_i (row-constant,
    // nonnegative profile so the weights stay valid)
    const int n = 8;
    const auto omega = ScalarProfile::segments({{0.0, 1.0, 0.5, 0.3}});
    auto freqs = omega.cell_averages(n);

    auto base_layer = GraphLayer::deterministic_dense(Graphon::constant(1.0), CouplingFunction::sine());
    DiscreteSystem base(n,
                        {DynamicLayer{build_deterministic_dense(base_layer, n), base_layer.coupling,
                                      base_layer}},
                        IntrinsicTerm::zero(), freqs);

    auto layer = GraphLayer::deterministic_dense(Graphon::constant(1.0), CouplingFunction::sine(), 1);
    // under the 1/n coefficient a row-constant matrix w_ij = omega_i sums to omega_i
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w[i * n + j] = freqs[i];
    WeightMatrix freq_matrix = WeightMatrix::from_dense(n, std::move(w), 1.0, Construction::DeterministicDense);
    DiscreteSystem layered(
        n,
        {DynamicLayer{build_deterministic_dense(layer, n), layer.coupling, layer},
         DynamicLayer{std::move(freq_matrix), CouplingFunction::constant_one(), std::nullopt}},
        IntrinsicTerm::zero(), std::nullopt);

    PhaseState s{0.0, random_phases(n, 3)};
    const auto d1 = rhs_discrete(base, s);
    const auto d2 = rhs_discrete(layered, s);
    for (int i = 0; i < n; ++i) CHECK(d1[i] == Approx(d2[i]).margin(1e-14));
}

TEST_CASE("averaged model equals the original on deterministic systems") {
    auto sys = dense_kuramoto(6, 0.8, 1.0);
    PhaseState s{0.0, random_phases(6, 4)};
    const auto a = rhs_discrete(sys, s);
    const auto b = rhs_averaged(sys, s);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("averaged sparse layer reduces to the expected dense coupling") {
    auto layer = GraphLayer::random_sparse(Graphon::constant(1.0), CouplingFunction::sine(), 0.3);
    const int n = 2;
    WeightMatrix wm = sample_random_sparse(layer, n, 17);
    DiscreteSystem sys(n, {DynamicLayer{std::move(wm), layer.coupling, layer}});
    PhaseState s{0.0, {0.0, kPi / 2.0}};
    // expectation weights are min(alpha^-1, 1) = 1, so this is the p = 1 dense case
    const auto d = rhs_averaged(sys, s);
    CHECK(d[0] == Approx(0.5).margin(1e-14));
    CHECK(d[1] == Approx(-0.5).margin(1e-14));

    // a random layer without provenance cannot be averaged
    DiscreteSystem orphan(n, {DynamicLayer{sample_random_sparse(layer, n, 17), layer.coupling,
                                           std::nullopt}});
    CHECK_THROWS_AS(rhs_averaged(orphan, s), DomainError);
}

TEST_CASE("zero kernel leaves only the intrinsic term") {
    const int n = 4;
    auto layer = GraphLayer::deterministic_dense(Graphon::constant(0.0), CouplingFunction::sine());
    DiscreteSystem sys(n, {DynamicLayer{build_deterministic_dense(layer, n), layer.coupling, layer}},
                       IntrinsicTerm::feedback(0.5, 0.0));
    PhaseState s{0.0, {0.1, 0.2, 0.3, 0.4}};
    const auto d = rhs_discrete(sys, s);
    for (int i = 0; i < n; ++i) CHECK(d[i] == Approx(0.5 * std::sin(-s.u[i])).margin(1e-15));
}

TEST_CASE("integrator holds fixed points and samples correctly") {
    auto sys = dense_kuramoto(3, 0.0, 0.0); // zero kernel, zero frequencies
    PhaseState init{0.0, {1.0, -2.0, 0.5}};
    const auto tr = integrate(sys, init, 1.0, 0.1, 2);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 1.0);
    CHECK(tr.times.size() == 6); // t = 0, 0.2, 0.4, 0.6, 0.8, 1.0
    for (const auto& state : tr.states)
        for (int i = 0; i < 3; ++i) CHECK(state[i] == init.u[i]);

    CHECK_THROWS_AS(integrate(sys, init, 1.0, -0.1, 1), DomainError);
    CHECK_THROWS_AS(integrate(sys, init, -1.0, 0.1, 1), DomainError);
}

TEST_CASE("initial conditions from profiles") {
    const auto s = initial_from_profile(ScalarProfile::linear(1.0), 4);
    REQUIRE(s.u.size() == 4);
    CHECK(s.u[0] == Approx(-0.375).margin(1e-15));
    CHECK(s.u[1] == Approx(-0.125).margin(1e-15));
    CHECK(s.u[2] == Approx(0.125).margin(1e-15));
    CHECK(s.u[3] == Approx(0.375).margin(1e-15));

    const auto c = initial_from_profile(ScalarProfile::constant(2.5), 7);
    for (double v : c.u) CHECK(v == Approx(2.5).margin(1e-15));

    // a step profile with cell-aligned breaks round-trips exactly
    const auto step = ScalarProfile::step_table({0.0, 0.25, 0.5, 0.75, 1.0}, {1.0, -1.0, 2.0, 0.0});
    const auto r = initial_from_profile(step, 4);
    CHECK(r.u == std::vector<double>{1.0, -1.0, 2.0, 0.0});
}

TEST_CASE("discrete l2 norm") {
    CHECK(discrete_l2_norm(std::vector<double>{1, 1, 1, 1}) == Approx(1.0).margin(1e-15));
    CHECK(discrete_l2_norm(std::vector<double>{3, 4}) == Approx(std::sqrt(12.5)).margin(1e-15));
    CHECK(discrete_l2_norm(std::vector<double>{0, 0, 0}) == 0.0);

    // step-embedding consistency: the vector norm equals the L2 norm of the
    // step function with those cell values
    const std::vector<double> u = {0.3, -1.2, 2.0, 0.7, -0.4};
    std::vector<double> breaks{0.0};
    for (int i = 1; i <= 5; ++i) breaks.push_back(i / 5.0);
    const auto step = ScalarProfile::step_table(breaks, u);
    CHECK(discrete_l2_norm(u) == Approx(step.l2_norm()).margin(1e-12));
}

TEST_CASE("rotation equivariance is exact for grid states") {
    // all phases and the shift are exactly representable, so u + theta incurs
    // no rounding and the pairwise differences are bit-identical
    const int n = 16;
    auto sys = dense_kuramoto(n, 1.0, 0.0);
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = ((i * 7) % 33 - 16) / 8.0;

    RhsEvaluator naive(sys);
    naive.use_factored_path(false);
    for (double theta : {0.5, -1.25, 2.0}) {
        std::vector<double> shifted(u);
        for (double& v : shifted) v += theta;
        std::vector<double> d0, d1;
        naive(u, 0.0, d0);
        naive(shifted, 0.0, d1);
        for (int i = 0; i < n; ++i) REQUIRE(d0[i] == d1[i]);
    }

    // the factored path satisfies the same identity up to roundoff
    RhsEvaluator fact(sys);
    std::vector<double> d0, d1;
    std::vector<double> shifted(u);
    for (double& v : shifted) v += 0.5;
    fact(u, 0.0, d0);
    fact(shifted, 0.0, d1);
    for (int i = 0; i < n; ++i) CHECK(d0[i] == Approx(d1[i]).margin(1e-13));
}

TEST_CASE("factored and per-edge evaluation agree to 1e-12") {
    const int n = 40;
    auto complete = GraphLayer::random_dense(Graphon::constant(0.6), CouplingFunction::sine(), 1);
    auto ring = GraphLayer::deterministic_dense(Graphon::nearest_neighbor(0.25),
                                                CouplingFunction::scaled(-1.7, CouplingFunction::double_sine()), 2);
    auto sparse = GraphLayer::random_sparse(Graphon::constant(1.0), CouplingFunction::sine(), 0.4);
    sparse.layer_id = 3;
    DiscreteSystem sys(n,
                       {DynamicLayer{sample_random_dense(complete, n, 1), complete.coupling, complete},
                        DynamicLayer{build_deterministic_dense(ring, n), ring.coupling, ring},
                        DynamicLayer{sample_random_sparse(sparse, n, 2), sparse.coupling, sparse}},
                       IntrinsicTerm::feedback(0.3, 0.5),
                       ScalarProfile::linear(1.0).cell_averages(n));
    RhsEvaluator fact(sys), naive(sys);
    naive.use_factored_path(false);
    for (int trial = 0; trial < 5; ++trial) {
        const auto u = random_phases(n, 100 + trial);
        std::vector<double> a, b;
        fact(u, 0.3, a);
        naive(u, 0.3, b);
        for (int i = 0; i < n; ++i) REQUIRE(a[i] == Approx(b[i]).margin(1e-12));
    }
}

TEST_CASE("threaded evaluation is bit-identical to sequential") {
    const int n = 37;
    auto sys = dense_kuramoto(n, 1.0, 1.0);
    const auto u = random_phases(n, 8);
    RhsEvaluator seq(sys, 1), par(sys, 4);
    std::vector<double> a, b;
    seq(u, 0.0, a);
    par(u, 0.0, b);
    for (int i = 0; i < n; ++i) REQUIRE(a[i] == b[i]);

    const PhaseState init{0.0, u};
    const auto t1 = integrate(sys, init, 2.0, 0.01, 50, 1);
    const auto t4 = integrate(sys, init, 2.0, 0.01, 50, 4);
    REQUIRE(t1.states.size() == t4.states.size());
    for (std::size_t k = 0; k < t1.states.size(); ++k)
        for (int i = 0; i < n; ++i) REQUIRE(t1.states[k][i] == t4.states[k][i]);
}

TEST_CASE("rk4 convergence order on the small test problem") {
    const int n = 10;
    auto sys = dense_kuramoto(n, 1.0, 1.0);
    PhaseState init{0.0, random_phases(n, 42)};
    const double t_end = 1.0;

    auto final_state = [&](double dt) { return integrate(sys, init, t_end, dt).final_state(); };

    const auto ref1 = final_state(0.1 / 16.0);
    const auto ref2 = final_state(0.05 / 16.0);
    auto err = [&](const std::vector<double>& u, const std::vector<double>& ref) {
        std::vector<double> d(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) d[i] = u[i] - ref[i];
        return discrete_l2_norm(d);
    };
    const double e1 = err(final_state(0.1), ref1);
    const double e2 = err(final_state(0.05), ref2);
    const double factor = e1 / e2;
    CHECK(factor >= 12.0);
    CHECK(factor <= 20.0);
}

TEST_CASE("blow-up detection reports the failing time") {
    const int n = 2;
    auto layer = GraphLayer::deterministic_dense(Graphon::constant(0.0), CouplingFunction::sine());
    DiscreteSystem sys(n, {DynamicLayer{build_deterministic_dense(layer, n), layer.coupling, layer}},
                       IntrinsicTerm::callback([](double u, double) { return u * u; }, 10.0));
    PhaseState init{0.0, {3.0, 3.0}}; // du/dt = u^2 escapes at t = 1/3
    try {
        integrate(sys, init, 1.0, 1e-3, 100);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.time > 0.0);
        CHECK(e.time < 1.0);
    }
}
