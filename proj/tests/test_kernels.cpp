#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oscnet/coupling.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/graphon.hpp"
#include "oscnet/profile.hpp"
#include "oscnet/quadrature.hpp"
#include "oscnet/rng.hpp"

using namespace oscnet;
using Catch::Approx;

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Factors of the two-band design kernel (H1 piecewise linear with a jump at
// 1/2, H2 = 0.05 on two bands).
ScalarProfile design_h1() {
    return ScalarProfile::segments({{0.0, 0.5, 10.0 / kSqrt3, -10.0 / kSqrt3},
                                    {0.5, 1.0, 0.0, 10.0 / kSqrt3}});
}

ScalarProfile design_h2() {
    return ScalarProfile::step_table({0.0, 0.2, 0.3, 0.7, 0.8, 1.0},
                                     {0.0, 0.05, 0.0, 0.05, 0.0});
}

} // namespace

TEST_CASE("profile evaluation and cell averages") {
    const auto lin = ScalarProfile::linear(1.0);
    CHECK(lin(0.0) == Approx(-0.5).margin(1e-15));
    CHECK(lin(1.0) == Approx(0.5).margin(1e-15));
    CHECK(lin.integral(0.0, 1.0) == Approx(0.0).margin(1e-15));

    // midpoint of the first of two cells
    CHECK(lin.cell_average(2, 1) == Approx(-0.25).margin(1e-15));
    CHECK(ScalarProfile::constant(3.0).cell_average(17, 5) == Approx(3.0).margin(1e-15));

    // exact integral of a(x - 1/2) over a deep cell, against quadrature
    const auto lin2 = ScalarProfile::linear(2.0);
    const double expected = lin2.cell_average(1000, 500);
    CHECK(expected == Approx(-0.001).margin(1e-15));
    const double quad = 1000.0 * gl_integrate([&](double x) { return lin2(x); }, 0.499, 0.5, 64);
    CHECK(expected == Approx(quad).margin(1e-13));
}

TEST_CASE("profile cell averages sum to the full integral") {
    const auto profiles = {ScalarProfile::linear(1.7), ScalarProfile::constant(0.4),
                           design_h1(), design_h2()};
    for (const auto& f : profiles) {
        for (int n : {7, 64}) {
            double sum = 0.0;
            for (int i = 1; i <= n; ++i) sum += f.cell_average(n, i) / n;
            CHECK(sum == Approx(f.integral(0.0, 1.0)).margin(1e-10));
        }
    }
}

TEST_CASE("profile sin/cos integrals match quadrature") {
    const auto f = design_h1();
    const double exact = f.integral_sin(0.1, 0.9);
    const double quad = gl_integrate_split([&](double x) { return std::sin(f(x)); }, 0.1, 0.9,
                                           f.breakpoints(), 64);
    CHECK(exact == Approx(quad).margin(1e-12));
    const double exact_cos = f.integral_cos(0.0, 1.0);
    const double quad_cos = gl_integrate_split([&](double x) { return std::cos(f(x)); }, 0.0, 1.0,
                                               f.breakpoints(), 64);
    CHECK(exact_cos == Approx(quad_cos).margin(1e-12));
}

TEST_CASE("step table and linear table profiles") {
    const auto step = ScalarProfile::step_table({0.0, 0.25, 1.0}, {2.0, -1.0});
    CHECK(step(0.1) == 2.0);
    CHECK(step(0.25) == -1.0);
    CHECK(step(1.0) == -1.0);
    CHECK(step.integral(0.0, 1.0) == Approx(0.25 * 2.0 - 0.75).margin(1e-15));

    const auto ramp = ScalarProfile::linear_table({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
    CHECK(ramp(0.25) == Approx(0.5).margin(1e-15));
    CHECK(ramp(0.75) == Approx(0.5).margin(1e-15));
    CHECK_THROWS_AS(ScalarProfile::step_table({0.0, 1.0}, {1.0, 2.0}), DomainError);
}

TEST_CASE("coupling functions carry exact bounds") {
    const auto s = CouplingFunction::sine();
    CHECK(s.lipschitz_bound() == 1.0);
    CHECK(s.sup_bound() == 1.0);
    CHECK(s(0.3) == Approx(std::sin(0.3)).margin(1e-16));

    const auto d = CouplingFunction::double_sine();
    CHECK(d.lipschitz_bound() == 2.0);
    CHECK(d.sup_bound() == 1.0);
    CHECK(d(0.3) == Approx(std::sin(0.6)).margin(1e-16));

    const auto one = CouplingFunction::constant_one();
    CHECK(one.lipschitz_bound() == 0.0);
    CHECK(one.sup_bound() == 1.0);
    CHECK(one(123.4) == 1.0);

    const auto sc = CouplingFunction::scaled(-0.7, d);
    CHECK(sc.lipschitz_bound() == Approx(1.4));
    CHECK(sc.sup_bound() == Approx(0.7));
    CHECK(sc(0.2) == Approx(-0.7 * std::sin(0.4)).margin(1e-16));
}

TEST_CASE("graphon pointwise evaluation") {
    CHECK(Graphon::constant(0.5).evaluate(0.3, 0.9) == 0.5);

    const auto nn = Graphon::nearest_neighbor(1.0 / 3.0);
    CHECK(nn.evaluate(0.1, 0.9) == 1.0); // |x-y| = 0.8 >= 1 - kappa
    CHECK(nn.evaluate(0.1, 0.2) == 1.0);
    CHECK(nn.evaluate(0.1, 0.6) == 0.0);

    const auto w = Graphon::rank1(design_h1(), design_h2());
    CHECK(w.evaluate(0.25, 0.75) == Approx(10.0 * 0.75 / kSqrt3 * 0.05).margin(1e-15));
    CHECK(w.evaluate(0.25, 0.75) == Approx(0.21650635094610966).margin(1e-12));
    CHECK(w.evaluate(0.25, 0.5) == 0.0); // off the bands

    CHECK_THROWS_AS(nn.evaluate(1.2, 0.0), DomainError);
}

TEST_CASE("rank1 factorization identity at random points") {
    const auto h1 = design_h1();
    const auto h2 = design_h2();
    const auto w = Graphon::rank1(h1, h2);
    for (int k = 0; k < 10000; ++k) {
        const double x = to_unit_double(mix64(11, k));
        const double y = to_unit_double(mix64(12, k));
        REQUIRE(w.evaluate(x, y) == h1(x) * h2(y));
    }
}

TEST_CASE("nearest-neighbor row integral is 2 kappa for every x") {
    for (double kappa : {1.0 / 3.0, 0.125, 0.5}) {
        const auto nn = Graphon::nearest_neighbor(kappa);
        for (double x : {0.0, 0.1, 0.37, 0.5, 0.93, 1.0}) {
            std::vector<double> cuts;
            for (double d : {x - kappa, x + kappa, x - (1 - kappa), x + (1 - kappa)})
                if (d > 0.0 && d < 1.0) cuts.push_back(d);
            const double row = gl_integrate_split([&](double y) { return nn.evaluate(x, y); }, 0.0,
                                                  1.0, cuts, 32);
            CHECK(row == Approx(2.0 * kappa).margin(1e-10));
        }
    }
}

TEST_CASE("declared bound constants match numeric recomputation") {
    const std::vector<Graphon> builtins = {
        Graphon::constant(0.5),
        Graphon::nearest_neighbor(1.0 / 3.0),
        Graphon::nearest_neighbor(0.125),
        Graphon::rank1(design_h1(), design_h2()),
        Graphon::rank1(ScalarProfile::constant(1.0), ScalarProfile::linear(1.0)),
        Graphon::piecewise_table({0.0, 0.5, 1.0}, {0.0, 0.25, 1.0},
                                 {{0.2, 0.8}, {1.0, 0.0}}),
    };
    for (const auto& w : builtins) {
        CHECK(w.numeric_row_bound(0, 1024, 4096) == Approx(w.c2_bound()).margin(1e-8));
        CHECK(w.numeric_row_bound(1, 1024, 4096) == Approx(w.c1_bound()).margin(1e-8));
        CHECK(w.numeric_l2_norm() == Approx(w.l2_norm()).margin(1e-7));
    }
}

TEST_CASE("constant kernel bounds are the constant itself") {
    const auto w = Graphon::constant(0.37);
    CHECK(w.c1_bound() == 0.37);
    CHECK(w.c2_bound() == 0.37);
    CHECK(w.l2_norm() == 0.37);
    CHECK(w.nonnegative());
    CHECK(w.range_in_unit_interval());
}

TEST_CASE("callback graphon validates declared bounds at construction") {
    auto f = [](double x, double y) { return x * y; };
    // true bounds: c1 = c2 = 1/2, l2 = 1/3
    CHECK_NOTHROW(Graphon::callback(f, 0.5, 0.5, 1.0 / 3.0, true, true));
    CHECK_THROWS_AS(Graphon::callback(f, 0.5, 0.1, 1.0 / 3.0, true, true), ConstructionError);
    CHECK_THROWS_AS(Graphon::callback(f, 0.5, 0.5, 0.01, true, true), ConstructionError);
}

TEST_CASE("signed kernels split into nonnegative parts") {
    auto f = [](double x, double y) { return std::sin(2.0 * std::numbers::pi * (x - y)); };
    // declared bounds are upper bounds; pad the exact values (2/pi, sqrt(1/2))
    // to absorb the validation quadrature's kink error on |sin|
    const auto w = Graphon::callback(f, 0.64, 0.64, 0.72, false, false, false);
    auto [wp, wm] = split_signed(w);
    CHECK(wp.nonnegative());
    CHECK(wm.nonnegative());
    for (int k = 0; k < 200; ++k) {
        const double x = to_unit_double(mix64(21, k));
        const double y = to_unit_double(mix64(22, k));
        const double v = w.evaluate(x, y);
        CHECK(wp.evaluate(x, y) - wm.evaluate(x, y) == Approx(v).margin(1e-15));
        CHECK(wp.evaluate(x, y) >= 0.0);
        CHECK(wm.evaluate(x, y) >= 0.0);
    }
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
    // an n-point rule is exact through degree 2n-1
    auto poly = [](double x) { return 5.0 * x * x * x - x + 2.0; };
    const double exact = 5.0 / 4.0 * (16.0 - 1.0) - 0.5 * (4.0 - 1.0) + 2.0 * 3.0;
    CHECK(gl_integrate(poly, -1.0, 2.0, 2) == Approx(exact).margin(1e-12));
    const auto& r32 = gauss_legendre(32);
    double wsum = 0.0;
    for (double w : r32.weights) wsum += w;
    CHECK(wsum == Approx(2.0).margin(1e-14));
}
