#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oscnet/errors.hpp"
#include "oscnet/io.hpp"
#include "oscnet/network.hpp"
#include "oscnet/rng.hpp"

using namespace oscnet;
using Catch::Approx;

namespace {

GraphLayer constant_dense(double p) {
    return GraphLayer::deterministic_dense(Graphon::constant(p), CouplingFunction::sine());
}

} // namespace

TEST_CASE("graphon cell averages") {
    CHECK(graphon_cell_average(Graphon::constant(0.5), 10, 3, 7) == Approx(0.5).margin(1e-15));

    // corner cell of the ring kernel: exact band geometry vs a fine Riemann sum
    const auto nn = Graphon::nearest_neighbor(1.0 / 3.0);
    const double exact = graphon_cell_average(nn, 3, 1, 3);
    CHECK(exact == Approx(0.5).margin(1e-14));
    const int grid = 1200;
    double hits = 0.0;
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const double x = (a + 0.5) / (3.0 * grid);
            const double y = 2.0 / 3.0 + (b + 0.5) / (3.0 * grid);
            hits += nn.evaluate(x, y);
        }
    // <W> = n^2 * integral = (midpoint hit fraction) over the cell
    const double riemann_avg = hits / (static_cast<double>(grid) * grid);
    CHECK(exact == Approx(riemann_avg).margin(2e-3));

    // product kernel: cell average factorizes
    const auto w = Graphon::rank1(ScalarProfile::linear(1.0), ScalarProfile::constant(2.0));
    CHECK(graphon_cell_average(w, 8, 3, 5) ==
          Approx(ScalarProfile::linear(1.0).cell_average(8, 3) * 2.0).margin(1e-15));
}

TEST_CASE("deterministic dense construction") {
    const auto wm = build_deterministic_dense(constant_dense(0.7), 5);
    CHECK(wm.alpha() == 1.0);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(wm.entry(i, j) == Approx(0.7).margin(1e-15));

    // ring kernel at n = 6: every row sums to exactly 2 kappa n = 4
    const auto ring = GraphLayer::deterministic_dense(Graphon::nearest_neighbor(1.0 / 3.0),
                                                      CouplingFunction::sine());
    const auto rm = build_deterministic_dense(ring, 6);
    for (double s : rm.row_sums()) CHECK(s == Approx(4.0).margin(1e-12));
}

TEST_CASE("rank1 dense matrices equal the factor outer product") {
    const auto h1 = ScalarProfile::segments({{0.0, 0.5, 10.0 / std::sqrt(3.0), -10.0 / std::sqrt(3.0)},
                                             {0.5, 1.0, 0.0, 10.0 / std::sqrt(3.0)}});
    const auto h2 = ScalarProfile::step_table({0.0, 0.2, 0.3, 0.7, 0.8, 1.0},
                                              {0.0, 0.05, 0.0, 0.05, 0.0});
    const auto layer = GraphLayer::deterministic_dense(Graphon::rank1(h1, h2),
                                                       CouplingFunction::sine());
    const int n = 40;
    const auto wm = build_deterministic_dense(layer, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            REQUIRE(wm.entry(i, j) == h1.cell_average(n, i + 1) * h2.cell_average(n, j + 1));
}

TEST_CASE("design kernel columns vanish off the bands at n = 1000") {
    const auto h1 = ScalarProfile::segments({{0.0, 0.5, 10.0 / std::sqrt(3.0), -10.0 / std::sqrt(3.0)},
                                             {0.5, 1.0, 0.0, 10.0 / std::sqrt(3.0)}});
    const auto h2 = ScalarProfile::step_table({0.0, 0.2, 0.3, 0.7, 0.8, 1.0},
                                              {0.0, 0.05, 0.0, 0.05, 0.0});
    const auto layer = GraphLayer::deterministic_dense(Graphon::rank1(h1, h2),
                                                       CouplingFunction::sine());
    const auto wm = build_deterministic_dense(layer, 1000);
    // j/n in [0.2, 0.3] u [0.7, 0.8] <=> 1-based j in 201..300, 701..800
    CHECK(wm.entry(0, 100) == 0.0);
    CHECK(wm.entry(500, 500) == 0.0);
    CHECK(wm.entry(999, 900) == 0.0);
    CHECK(wm.entry(0, 250) > 0.0);
    CHECK(wm.entry(999, 750) > 0.0);
}

TEST_CASE("random dense sampling: edge cases and density") {
    auto ones = GraphLayer::random_dense(Graphon::constant(1.0), CouplingFunction::sine());
    const auto m1 = sample_random_dense(ones, 30, 7);
    CHECK(m1.nonzero_count() == 30 * 30);

    auto zeros = GraphLayer::random_dense(Graphon::constant(0.0), CouplingFunction::sine());
    CHECK(sample_random_dense(zeros, 30, 7).nonzero_count() == 0);

    auto half = GraphLayer::random_dense(Graphon::constant(0.5), CouplingFunction::sine());
    const int n = 1000;
    const auto m = sample_random_dense(half, n, 20260809);
    const double density = static_cast<double>(m.nonzero_count()) / (static_cast<double>(n) * n);
    CHECK(std::abs(density - 0.5) < 3.0 * 0.5 / n);
}

TEST_CASE("random dense sampling rejects probabilities above one") {
    GraphLayer layer = constant_dense(1.0);
    layer.construction = Construction::RandomDense;
    layer.graphon = Graphon::rank1(ScalarProfile::constant(1.5), ScalarProfile::constant(1.0));
    CHECK_THROWS_AS(sample_random_dense(layer, 10, 1), ConstructionError);
}

TEST_CASE("random sparse sampling") {
    auto layer = GraphLayer::random_sparse(Graphon::constant(1.0), CouplingFunction::sine(), 0.3);
    const int n = 1000;
    const auto m = sample_random_sparse(layer, n, 20260809);
    const double alpha = std::pow(static_cast<double>(n), -0.3);
    CHECK(m.alpha() == Approx(alpha).margin(1e-15));

    // mean degree concentrates around n * alpha = n^0.7 ~ 125.9
    const auto deg = degree_stats(m);
    double mean = 0.0;
    for (double d : deg.in_degrees) mean += d;
    mean /= n;
    CHECK(std::abs(mean - std::pow(static_cast<double>(n), 0.7)) < 1.5);

    // truncation inactive for p = 2 > 1: probability alpha * 2
    CHECK(Graphon::constant(2.0).truncated_cell_average(10, 1, 1, 1.0 / alpha) ==
          Approx(2.0).margin(1e-15));
    CHECK(alpha * 2.0 == Approx(0.25178508235882353).epsilon(1e-3));

    CHECK_THROWS_AS(GraphLayer::random_sparse(Graphon::constant(1.0), CouplingFunction::sine(), 0.6),
                    ConstructionError);
}

TEST_CASE("degree stats") {
    const auto wm = build_deterministic_dense(constant_dense(1.0), 4);
    const auto deg = degree_stats(wm);
    for (double d : deg.in_degrees) CHECK(d == Approx(4.0).margin(1e-15));
    for (double d : deg.out_degrees) CHECK(d == Approx(4.0).margin(1e-15));

    const auto wp = build_deterministic_dense(constant_dense(0.25), 8);
    const auto dp = degree_stats(wp);
    for (double d : dp.in_degrees) {
        CHECK(d == Approx(8 * 0.25).margin(1e-14));
        CHECK(d <= 8 * Graphon::constant(0.25).c2_bound() + 1e-14);
    }
}

TEST_CASE("sampling is reproducible and undirected sampling is symmetric") {
    auto layer = GraphLayer::random_dense(Graphon::constant(0.4), CouplingFunction::sine());
    REQUIRE(layer.undirected); // constant kernels are symmetric
    const auto a = sample_random_dense(layer, 64, 99);
    const auto b = sample_random_dense(layer, 64, 99);
    const auto c = sample_random_dense(layer, 64, 100);
    bool identical = true, differs = false, symmetric = true;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            identical = identical && a.entry(i, j) == b.entry(i, j);
            differs = differs || a.entry(i, j) != c.entry(i, j);
            symmetric = symmetric && a.entry(i, j) == a.entry(j, i);
        }
    CHECK(identical);
    CHECK(differs);
    CHECK(symmetric);
}

TEST_CASE("storage layout does not change sampled values") {
    auto layer = GraphLayer::random_sparse(Graphon::constant(1.0), CouplingFunction::sine(), 0.3);
    const int n = 60;
    const auto dense = sample_random_sparse(layer, n, 5);

    const double alpha = std::pow(static_cast<double>(n), -0.3);
    auto gen = [&](int i, int j) {
        int a = i, b = j;
        if (a > b) std::swap(a, b);
        const double p = alpha * layer.graphon.truncated_cell_average(n, a + 1, b + 1, 1.0 / alpha);
        return edge_uniform(5, layer.layer_id, a, b) < p ? 1.0 : 0.0;
    };
    const auto sparse = WeightMatrix::from_generator(n, gen, alpha, Construction::RandomSparse,
                                                     SeedRecord{5, layer.layer_id}, true, true);
    CHECK_FALSE(sparse.dense_storage());
    CHECK(dense.dense_storage());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) REQUIRE(dense.entry(i, j) == sparse.entry(i, j));
}

TEST_CASE("empirical edge frequency matches cell probabilities") {
    auto layer = GraphLayer::random_dense(Graphon::constant(0.3), CouplingFunction::sine());
    const int n = 50, trials = 200;
    std::vector<double> freq(n * n, 0.0);
    for (int t = 0; t < trials; ++t) {
        const auto m = sample_random_dense(layer, n, derive_seed(424242, t));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) freq[i * n + j] += m.entry(i, j);
    }
    const double sigma = std::sqrt(0.3 * 0.7 / trials);
    for (double& f : freq) {
        f /= trials;
        REQUIRE(std::abs(f - 0.3) < 4.0 * sigma);
    }
}

TEST_CASE("matrix io round trips") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "oscnet_io_test";
    fs::create_directories(dir);

    auto layer = GraphLayer::random_sparse(Graphon::constant(1.0), CouplingFunction::sine(), 0.3);
    const auto wm = sample_random_sparse(layer, 40, 11);

    write_matrix_binary(wm, dir / "m.bin");
    const auto back = read_matrix_binary(dir / "m.bin");
    REQUIRE(back.n() == wm.n());
    CHECK(back.alpha() == wm.alpha());
    CHECK(back.construction() == wm.construction());
    REQUIRE(back.seed().has_value());
    CHECK(back.seed()->seed == 11);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) REQUIRE(back.entry(i, j) == wm.entry(i, j));

    // deterministic bytes
    write_matrix_pgm(wm, dir / "m1.pgm");
    write_matrix_pgm(wm, dir / "m2.pgm");
    std::ifstream f1(dir / "m1.pgm", std::ios::binary), f2(dir / "m2.pgm", std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(s1.substr(0, 2) == "P5");

    write_matrix_csv(wm, dir / "m.csv");
    std::ifstream fc(dir / "m.csv");
    std::string header;
    std::getline(fc, header);
    CHECK(header == "i,j,w");
    fs::remove_all(dir);
}
