#include "oscnet/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscnet/circular.hpp"
#include "oscnet/errors.hpp"

namespace oscnet {

std::vector<double> mesh_midpoints(int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = (2.0 * i + 1.0) / (2.0 * n);
    return x;
}

double picard_step_bound(const ContinuumSystem& sys) {
    if (sys.layers.empty()) throw DomainError("picard_step_bound: no layers");
    const double lf = sys.intrinsic.lipschitz();
    double ld = 0.0, c2 = 0.0, l2 = 0.0;
    for (const auto& layer : sys.layers) {
        ld = std::max(ld, layer.coupling.lipschitz_bound());
        c2 = std::max(c2, layer.graphon.c2_bound());
        l2 = std::max(l2, layer.graphon.l2_norm());
    }
    const double m = static_cast<double>(sys.layers.size());
    const double denom = 2.0 * (lf + m * ld * (c2 + l2));
    PicardOptions defaults;
    if (denom <= 0.0) return defaults.window_cap; // affine dynamics: any window works
    return 1.0 / denom;
}

DiscreteSystem discretize_dense(const ContinuumSystem& sys, int n_mesh) {
    std::vector<DynamicLayer> layers;
    std::uint32_t id = 1;
    for (const auto& layer : sys.layers) {
        GraphLayer gl = GraphLayer::deterministic_dense(layer.graphon, layer.coupling, id++);
        WeightMatrix wm = build_deterministic_dense(gl, n_mesh);
        layers.push_back(DynamicLayer{std::move(wm), layer.coupling, std::move(gl)});
    }
    std::optional<std::vector<double>> freqs;
    if (sys.omega) freqs = sys.omega->cell_averages(n_mesh);
    return DiscreteSystem(n_mesh, std::move(layers), sys.intrinsic, std::move(freqs));
}

Trajectory solve_continuum_collocation(const ContinuumSystem& sys, double t_end, double dt,
                                       int n_mesh, int sample_every, int threads) {
    const DiscreteSystem d = discretize_dense(sys, n_mesh);
    PhaseState init;
    init.t = 0.0;
    init.u = sys.g.cell_averages(n_mesh);
    return integrate(d, init, t_end, dt, sample_every, threads);
}

namespace {

// Midpoint-collocated right-hand side for the Picard map: kernels evaluated
// pointwise at cell midpoints (not cell-averaged), space integral = midpoint
// rule. This keeps the fixed-point route independent of the collocation one.
struct PicardRhs {
    int n = 0;
    const ContinuumSystem* sys = nullptr;
    std::vector<std::vector<double>> kernels; // per layer, row-major W(x_i, y_j) / n
    std::vector<double> omega_vals;
    std::vector<double> sinv, cosv, ya, yb;

    PicardRhs(const ContinuumSystem& s, int n_mesh) : n(n_mesh), sys(&s) {
        const auto x = mesh_midpoints(n);
        kernels.reserve(s.layers.size());
        for (const auto& layer : s.layers) {
            std::vector<double> k(static_cast<std::size_t>(n) * n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    k[static_cast<std::size_t>(i) * n + j] = layer.graphon.evaluate(x[i], x[j]) / n;
            kernels.push_back(std::move(k));
        }
        omega_vals.assign(static_cast<std::size_t>(n), 0.0);
        if (s.omega)
            for (int i = 0; i < n; ++i) omega_vals[i] = (*s.omega)(x[i]);
        sinv.resize(n);
        cosv.resize(n);
        ya.resize(n);
        yb.resize(n);
    }

    void operator()(const std::vector<double>& u, double t, std::vector<double>& out) {
        out.resize(u.size());
        for (int i = 0; i < n; ++i) out[i] = sys->intrinsic(u[i], t) + omega_vals[i];
        for (std::size_t k = 0; k < sys->layers.size(); ++k) {
            const auto& coupling = sys->layers[k].coupling;
            const double* w = kernels[k].data();
            const int harmonic = coupling.harmonic();
            if (harmonic == 0) {
                const double scale = coupling.scale();
                for (int i = 0; i < n; ++i) {
                    const double* row = w + static_cast<std::size_t>(i) * n;
                    double s = 0.0;
                    for (int j = 0; j < n; ++j) s += row[j];
                    out[i] += scale * s;
                }
                continue;
            }
            const double c = static_cast<double>(harmonic);
            for (int i = 0; i < n; ++i) {
                sinv[i] = std::sin(c * u[i]);
                cosv[i] = std::cos(c * u[i]);
            }
            for (int i = 0; i < n; ++i) {
                const double* row = w + static_cast<std::size_t>(i) * n;
                double s = 0.0, cc = 0.0;
                for (int j = 0; j < n; ++j) {
                    s += row[j] * sinv[j];
                    cc += row[j] * cosv[j];
                }
                ya[i] = s;
                yb[i] = cc;
            }
            const double scale = coupling.scale();
            for (int i = 0; i < n; ++i) out[i] += scale * (cosv[i] * ya[i] - sinv[i] * yb[i]);
        }
    }
};

double sup_time_l2(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    double m = 0.0;
    std::vector<double> diff;
    for (std::size_t q = 0; q < a.size(); ++q) {
        diff.resize(a[q].size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a[q][i] - b[q][i];
        m = std::max(m, discrete_l2_norm(diff));
    }
    return m;
}

} // namespace

Trajectory solve_continuum_picard(const ContinuumSystem& sys, double t_end, int n_mesh,
                                  double tol, const PicardOptions& opts, PicardReport* report) {
    if (!(tol > 0.0)) throw DomainError("solve_continuum_picard: tol must be positive");
    if (!(t_end > 0.0)) throw DomainError("solve_continuum_picard: t_end must be positive");
    if (n_mesh <= 0) throw DomainError("solve_continuum_picard: n_mesh must be positive");

    const double window = opts.window_override > 0.0
                              ? opts.window_override
                              : std::min(picard_step_bound(sys), opts.window_cap);
    const int q_count = opts.inner_intervals;

    PicardRhs rhs(sys, n_mesh);

    // initial data at cell midpoints
    const auto x = mesh_midpoints(n_mesh);
    std::vector<double> g(static_cast<std::size_t>(n_mesh));
    for (int i = 0; i < n_mesh; ++i) g[i] = sys.g(x[i]);

    Trajectory tr;
    tr.dt = window / q_count;
    tr.sample_every = opts.sample_stride;
    tr.integrator = "picard";
    tr.times.push_back(0.0);
    tr.states.push_back(g);

    if (report) *report = PicardReport{};

    double t0 = 0.0;
    int window_index = 0;
    std::vector<std::vector<double>> iter(static_cast<std::size_t>(q_count) + 1);
    std::vector<std::vector<double>> next(static_cast<std::size_t>(q_count) + 1);
    std::vector<std::vector<double>> rhs_vals(static_cast<std::size_t>(q_count) + 1);

    while (t0 < t_end - 1e-12) {
        const double len = std::min(window, t_end - t0);
        const double dtau = len / q_count;
        for (auto& v : iter) v = g; // start from the constant-in-time iterate

        double prev_dist = std::numeric_limits<double>::infinity();
        int grow_streak = 0;
        int iterations = 0;
        for (int it = 0; it < opts.max_iterations; ++it) {
            ++iterations;
            for (int q = 0; q <= q_count; ++q) rhs(iter[q], t0 + q * dtau, rhs_vals[q]);
            // K(u)(tau_q) = g + cumulative trapezoid of the RHS
            next[0] = g;
            for (int q = 1; q <= q_count; ++q) {
                next[q].resize(g.size());
                for (std::size_t i = 0; i < g.size(); ++i)
                    next[q][i] = next[q - 1][i] + 0.5 * dtau * (rhs_vals[q - 1][i] + rhs_vals[q][i]);
            }
            const double dist = sup_time_l2(next, iter);
            iter.swap(next);
            if (report && it >= 1 && prev_dist > 1e-13)
                report->max_contraction_ratio = std::max(report->max_contraction_ratio, dist / prev_dist);
            if (dist < tol) break;
            if (dist > prev_dist) {
                if (++grow_streak >= 3)
                    throw ContractionError("picard iteration stopped contracting in window " +
                                               std::to_string(window_index),
                                           window_index);
            } else {
                grow_streak = 0;
            }
            prev_dist = dist;
            if (it + 1 == opts.max_iterations)
                throw ContractionError("picard iteration did not converge in window " +
                                           std::to_string(window_index),
                                       window_index);
        }

        if (report) {
            report->window_starts.push_back(t0);
            report->iterations.push_back(iterations);
        }
        for (int q = 1; q <= q_count; ++q) {
            if (q % opts.sample_stride == 0 || q == q_count) {
                tr.times.push_back(t0 + q * dtau);
                tr.states.push_back(iter[q]);
            }
        }
        g = iter[q_count];
        t0 += len;
        ++window_index;
    }
    return tr;
}

// --- distances ----------------------------------------------------------------

namespace {

std::vector<double> prolong(std::span<const double> coarse, std::size_t fine_size) {
    const std::size_t ratio = fine_size / coarse.size();
    std::vector<double> out(fine_size);
    for (std::size_t i = 0; i < coarse.size(); ++i)
        for (std::size_t r = 0; r < ratio; ++r) out[i * ratio + r] = coarse[i];
    return out;
}

} // namespace

double l2_distance(std::span<const double> a, std::span<const double> b, bool mod_rotation) {
    std::vector<double> pa, pb;
    if (a.size() != b.size()) {
        const std::size_t lo = std::min(a.size(), b.size());
        const std::size_t hi = std::max(a.size(), b.size());
        if (lo == 0 || hi % lo != 0)
            throw DomainError("l2_distance: sizes must match or be exact integer multiples");
        if (a.size() < b.size()) {
            pa = prolong(a, hi);
            a = pa;
        } else {
            pb = prolong(b, hi);
            b = pb;
        }
    }
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    if (!mod_rotation) return discrete_l2_norm(diff);
    return circular_rms_mod_shift(diff);
}

double l2_distance(const MeshFunction& a, const MeshFunction& b, bool mod_rotation) {
    return l2_distance(std::span<const double>(a.values), std::span<const double>(b.values),
                       mod_rotation);
}

} // namespace oscnet
