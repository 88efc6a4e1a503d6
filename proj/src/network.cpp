#include "oscnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "oscnet/errors.hpp"
#include "oscnet/rng.hpp"

namespace oscnet {

std::string construction_name(Construction c) {
    switch (c) {
        case Construction::DeterministicDense: return "deterministic-dense";
        case Construction::RandomDense: return "random-dense";
        case Construction::RandomSparse: return "random-sparse";
    }
    return "?";
}

GraphLayer GraphLayer::deterministic_dense(Graphon w, CouplingFunction d, std::uint32_t id) {
    GraphLayer l;
    l.graphon = std::move(w);
    l.coupling = d;
    l.construction = Construction::DeterministicDense;
    l.layer_id = id;
    return l;
}

GraphLayer GraphLayer::random_dense(Graphon w, CouplingFunction d, std::uint32_t id) {
    GraphLayer l;
    l.graphon = std::move(w);
    l.coupling = d;
    l.construction = Construction::RandomDense;
    l.layer_id = id;
    l.undirected = l.graphon.symmetric();
    if (!l.graphon.range_in_unit_interval())
        throw ConstructionError("random-dense layer requires a kernel with range in [0,1]");
    return l;
}

GraphLayer GraphLayer::random_sparse(Graphon w, CouplingFunction d, double gamma, std::uint32_t id) {
    GraphLayer l;
    l.graphon = std::move(w);
    l.coupling = d;
    l.construction = Construction::RandomSparse;
    l.gamma = gamma;
    l.layer_id = id;
    l.undirected = l.graphon.symmetric();
    if (!(gamma > 0.0 && gamma < 0.5))
        throw ConstructionError("random-sparse layer requires gamma in (0, 1/2)");
    if (!l.graphon.nonnegative())
        throw ConstructionError("random-sparse layer requires a nonnegative kernel");
    return l;
}

// --- WeightMatrix ------------------------------------------------------------

WeightMatrix WeightMatrix::from_dense(int n, std::vector<double> w, double alpha, Construction c,
                                      std::optional<SeedRecord> seed, bool symmetric) {
    if (n <= 0 || w.size() != static_cast<std::size_t>(n) * n)
        throw ConstructionError("WeightMatrix::from_dense: size mismatch");
    WeightMatrix m;
    m.n_ = n;
    m.alpha_ = alpha;
    m.construction_ = c;
    m.seed_ = seed;
    m.symmetric_ = symmetric;
    m.dense_ = true;
    m.w_ = std::move(w);
    return m;
}

WeightMatrix WeightMatrix::from_generator(int n, const std::function<double(int, int)>& w_ij,
                                          double alpha, Construction c,
                                          std::optional<SeedRecord> seed, bool symmetric,
                                          bool force_sparse_storage) {
    if (n <= 0) throw ConstructionError("WeightMatrix: n must be positive");
    WeightMatrix m;
    m.n_ = n;
    m.alpha_ = alpha;
    m.construction_ = c;
    m.seed_ = seed;
    m.symmetric_ = symmetric;
    m.dense_ = !force_sparse_storage && n <= kDenseStorageMaxN;
    if (m.dense_) {
        m.w_.resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.w_[static_cast<std::size_t>(i) * n + j] = w_ij(i, j);
    } else {
        m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double v = w_ij(i, j);
                if (v != 0.0) {
                    m.col_idx_.push_back(j);
                    m.values_.push_back(v);
                }
            }
            m.row_ptr_[static_cast<std::size_t>(i) + 1] = static_cast<std::int64_t>(m.col_idx_.size());
        }
    }
    return m;
}

double WeightMatrix::entry(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw DomainError("WeightMatrix::entry: index out of range");
    if (dense_) return w_[static_cast<std::size_t>(i) * n_ + j];
    const auto lo = col_idx_.begin() + row_ptr_[i];
    const auto hi = col_idx_.begin() + row_ptr_[i + 1];
    auto it = std::lower_bound(lo, hi, j);
    if (it == hi || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::int64_t WeightMatrix::nonzero_count() const {
    if (!dense_) return static_cast<std::int64_t>(values_.size());
    std::int64_t c = 0;
    for (double v : w_)
        if (v != 0.0) ++c;
    return c;
}

std::vector<double> WeightMatrix::row_sums() const {
    std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
    if (dense_) {
        for (int i = 0; i < n_; ++i) {
            const double* row = w_.data() + static_cast<std::size_t>(i) * n_;
            double s = 0.0;
            for (int j = 0; j < n_; ++j) s += row[j];
            out[i] = s;
        }
    } else {
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k];
            out[i] = s;
        }
    }
    return out;
}

std::vector<double> WeightMatrix::col_sums() const {
    std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
    if (dense_) {
        for (int i = 0; i < n_; ++i) {
            const double* row = w_.data() + static_cast<std::size_t>(i) * n_;
            for (int j = 0; j < n_; ++j) out[j] += row[j];
        }
    } else {
        for (int i = 0; i < n_; ++i)
            for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out[col_idx_[k]] += values_[k];
    }
    return out;
}

void WeightMatrix::dual_matvec(const double* a, const double* b, double* y_a, double* y_b,
                               int row_begin, int row_end) const {
    // 4-way unrolled accumulators; combine order fixed, so results are
    // deterministic and independent of the caller's row partition.
    if (dense_) {
        for (int i = row_begin; i < row_end; ++i) {
            const double* row = w_.data() + static_cast<std::size_t>(i) * n_;
            double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
            double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
            int j = 0;
            for (; j + 4 <= n_; j += 4) {
                s0 += row[j] * a[j];
                c0 += row[j] * b[j];
                s1 += row[j + 1] * a[j + 1];
                c1 += row[j + 1] * b[j + 1];
                s2 += row[j + 2] * a[j + 2];
                c2 += row[j + 2] * b[j + 2];
                s3 += row[j + 3] * a[j + 3];
                c3 += row[j + 3] * b[j + 3];
            }
            for (; j < n_; ++j) {
                s0 += row[j] * a[j];
                c0 += row[j] * b[j];
            }
            y_a[i] = (s0 + s1) + (s2 + s3);
            y_b[i] = (c0 + c1) + (c2 + c3);
        }
    } else {
        for (int i = row_begin; i < row_end; ++i) {
            double s = 0.0, c = 0.0;
            for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
                const double w = values_[k];
                const int j = col_idx_[k];
                s += w * a[j];
                c += w * b[j];
            }
            y_a[i] = s;
            y_b[i] = c;
        }
    }
}

void WeightMatrix::accumulate_pairwise(const double* u, double coeff, const CouplingFunction& d,
                                       double* acc, int row_begin, int row_end) const {
    if (dense_) {
        for (int i = row_begin; i < row_end; ++i) {
            const double* row = w_.data() + static_cast<std::size_t>(i) * n_;
            const double ui = u[i];
            double s = 0.0;
            for (int j = 0; j < n_; ++j)
                if (row[j] != 0.0) s += row[j] * d(u[j] - ui);
            acc[i] += coeff * s;
        }
    } else {
        for (int i = row_begin; i < row_end; ++i) {
            const double ui = u[i];
            double s = 0.0;
            for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                s += values_[k] * d(u[col_idx_[k]] - ui);
            acc[i] += coeff * s;
        }
    }
}

// --- builders ----------------------------------------------------------------

double graphon_cell_average(const Graphon& w, int n, int i, int j) {
    return w.cell_average(n, i, j);
}

WeightMatrix build_deterministic_dense(const GraphLayer& layer, int n) {
    if (layer.construction != Construction::DeterministicDense)
        throw ConstructionError("build_deterministic_dense: layer is not deterministic-dense");
    if (layer.graphon.kind() == Graphon::Kind::Rank1) {
        // outer product of the factor cell-average vectors
        const auto h1 = layer.graphon.factor1().cell_averages(n);
        const auto h2 = layer.graphon.factor2().cell_averages(n);
        std::vector<double> w(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(i) * n + j] = h1[i] * h2[j];
        if (n <= WeightMatrix::kDenseStorageMaxN)
            return WeightMatrix::from_dense(n, std::move(w), 1.0, Construction::DeterministicDense,
                                            {}, layer.graphon.symmetric());
        auto gen = [&w, n](int i, int j) { return w[static_cast<std::size_t>(i) * n + j]; };
        return WeightMatrix::from_generator(n, gen, 1.0, Construction::DeterministicDense, {},
                                            layer.graphon.symmetric(), true);
    }
    auto gen = [&layer, n](int i, int j) { return layer.graphon.cell_average(n, i + 1, j + 1); };
    return WeightMatrix::from_generator(n, gen, 1.0, Construction::DeterministicDense, {},
                                        layer.graphon.symmetric());
}

namespace {

void check_undirected(const GraphLayer& layer) {
    if (layer.undirected && !layer.graphon.symmetric())
        throw ConstructionError("undirected sampling requires a symmetric kernel");
}

} // namespace

WeightMatrix sample_random_dense(const GraphLayer& layer, int n, std::uint64_t seed) {
    if (layer.construction != Construction::RandomDense)
        throw ConstructionError("sample_random_dense: layer is not random-dense");
    if (!layer.graphon.range_in_unit_interval())
        throw ConstructionError("sample_random_dense: kernel range must lie in [0,1]");
    check_undirected(layer);
    const SeedRecord rec{seed, layer.layer_id};
    auto gen = [&](int i, int j) {
        int a = i, b = j;
        if (layer.undirected && a > b) std::swap(a, b);
        double p = layer.graphon.cell_average(n, a + 1, b + 1);
        if (p < -1e-12 || p > 1.0 + 1e-12)
            throw ConstructionError(
                "sample_random_dense: cell probability outside [0,1]; rescale the kernel by a "
                "normalization constant w0 and scale the coupling by w0 instead");
        p = std::clamp(p, 0.0, 1.0);
        return edge_uniform(seed, layer.layer_id, static_cast<std::uint64_t>(a),
                            static_cast<std::uint64_t>(b)) < p
                   ? 1.0
                   : 0.0;
    };
    return WeightMatrix::from_generator(n, gen, 1.0, Construction::RandomDense, rec,
                                        layer.undirected);
}

WeightMatrix sample_random_sparse(const GraphLayer& layer, int n, std::uint64_t seed) {
    if (layer.construction != Construction::RandomSparse)
        throw ConstructionError("sample_random_sparse: layer is not random-sparse");
    if (!layer.graphon.nonnegative())
        throw ConstructionError("sample_random_sparse: kernel must be nonnegative");
    if (!(layer.gamma > 0.0 && layer.gamma < 0.5))
        throw ConstructionError("sample_random_sparse: gamma must lie in (0, 1/2)");
    check_undirected(layer);
    const double alpha = std::pow(static_cast<double>(n), -layer.gamma);
    const double cap = 1.0 / alpha;
    const SeedRecord rec{seed, layer.layer_id};
    auto gen = [&](int i, int j) {
        int a = i, b = j;
        if (layer.undirected && a > b) std::swap(a, b);
        double p = alpha * layer.graphon.truncated_cell_average(n, a + 1, b + 1, cap);
        if (p > 1.0 + 1e-9)
            throw ConstructionError("sample_random_sparse: truncated probability exceeded 1");
        p = std::clamp(p, 0.0, 1.0);
        return edge_uniform(seed, layer.layer_id, static_cast<std::uint64_t>(a),
                            static_cast<std::uint64_t>(b)) < p
                   ? 1.0
                   : 0.0;
    };
    return WeightMatrix::from_generator(n, gen, alpha, Construction::RandomSparse, rec,
                                        layer.undirected);
}

WeightMatrix realize(const GraphLayer& layer, int n, std::uint64_t seed) {
    switch (layer.construction) {
        case Construction::DeterministicDense: return build_deterministic_dense(layer, n);
        case Construction::RandomDense: return sample_random_dense(layer, n, seed);
        case Construction::RandomSparse: return sample_random_sparse(layer, n, seed);
    }
    throw ConstructionError("realize: unknown construction");
}

DegreeStats degree_stats(const WeightMatrix& wm) {
    return DegreeStats{wm.row_sums(), wm.col_sums()};
}

} // namespace oscnet
