#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oscnet/coupling.hpp"
#include "oscnet/graphon.hpp"

namespace oscnet {

enum class Construction { DeterministicDense, RandomDense, RandomSparse };

std::string construction_name(Construction c);

/// A sampling/averaging recipe for one layer of the model: which kernel,
/// which coupling, and how the n-node weight matrix is realized from it.
struct GraphLayer {
    Graphon graphon = Graphon::constant(0.0);
    CouplingFunction coupling = CouplingFunction::sine();
    Construction construction = Construction::DeterministicDense;
    double gamma = 0.0;       // sparse decay exponent, in (0, 1/2); alpha_n = n^-gamma
    std::uint32_t layer_id = 1;
    bool undirected = false;  // symmetric sampling (requires symmetric graphon)

    static GraphLayer deterministic_dense(Graphon w, CouplingFunction d, std::uint32_t id = 1);
    static GraphLayer random_dense(Graphon w, CouplingFunction d, std::uint32_t id = 1);
    static GraphLayer random_sparse(Graphon w, CouplingFunction d, double gamma, std::uint32_t id = 1);
};

struct SeedRecord {
    std::uint64_t seed = 0;
    std::uint32_t layer_id = 0;
};

/// Realized n x n nonnegative weights for one layer at one n. Stored dense
/// (row-major) up to n = kDenseStorageMaxN and as CSR index lists above;
/// behavior is identical either way.
class WeightMatrix {
public:
    static constexpr int kDenseStorageMaxN = 4096;

    int n() const { return n_; }
    double alpha() const { return alpha_; }
    Construction construction() const { return construction_; }
    const std::optional<SeedRecord>& seed() const { return seed_; }
    bool dense_storage() const { return dense_; }
    bool symmetric_sampled() const { return symmetric_; }

    double entry(int i, int j) const; // 0-based
    std::int64_t nonzero_count() const;

    /// Row sums d+_i and column sums d-_j.
    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;

    /// y_sin[i] = sum_j w_ij * a[j], y_cos[i] = sum_j w_ij * b[j], both in one
    /// pass over the stored entries (fixed summation order; deterministic).
    void dual_matvec(const double* a, const double* b, double* y_a, double* y_b,
                     int row_begin, int row_end) const;

    /// acc[i] += coeff * sum_j w_ij * d(u[j] - u[i]) evaluated per edge
    /// (reference path for the factored evaluation).
    void accumulate_pairwise(const double* u, double coeff,
                             const CouplingFunction& d, double* acc,
                             int row_begin, int row_end) const;

    // construction (used by the builders below and by import)
    static WeightMatrix from_dense(int n, std::vector<double> w, double alpha,
                                   Construction c, std::optional<SeedRecord> seed = {},
                                   bool symmetric = false);
    static WeightMatrix from_generator(int n, const std::function<double(int, int)>& w_ij,
                                       double alpha, Construction c,
                                       std::optional<SeedRecord> seed, bool symmetric,
                                       bool force_sparse_storage = false);

private:
    int n_ = 0;
    double alpha_ = 1.0;
    Construction construction_ = Construction::DeterministicDense;
    std::optional<SeedRecord> seed_;
    bool symmetric_ = false;
    bool dense_ = true;

    std::vector<double> w_;            // dense row-major, n*n
    std::vector<std::int64_t> row_ptr_; // CSR
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// <W>_{ij}^n with 1-based i, j (thin wrapper over Graphon::cell_average).
double graphon_cell_average(const Graphon& w, int n, int i, int j);

/// w_ij = <W>_{ij}^n, alpha = 1. Rank-1 kernels build as an outer product of
/// the factor cell-average vectors.
WeightMatrix build_deterministic_dense(const GraphLayer& layer, int n);

/// Bernoulli entries, P(edge) = <W>_{ij}^n, alpha = 1; throws
/// ConstructionError when a cell probability leaves [0,1] (rescale the
/// kernel and coupling by a normalization constant w0 in that case).
WeightMatrix sample_random_dense(const GraphLayer& layer, int n, std::uint64_t seed);

/// Bernoulli entries, P(edge) = alpha * <min(alpha^-1, W)>_{ij}^n with
/// alpha = n^-gamma.
WeightMatrix sample_random_sparse(const GraphLayer& layer, int n, std::uint64_t seed);

/// Realize a layer at size n (dispatch on layer.construction).
WeightMatrix realize(const GraphLayer& layer, int n, std::uint64_t seed);

struct DegreeStats {
    std::vector<double> in_degrees;  // row sums
    std::vector<double> out_degrees; // column sums
};

DegreeStats degree_stats(const WeightMatrix& wm);

} // namespace oscnet
