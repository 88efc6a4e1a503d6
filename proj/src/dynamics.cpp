#include "oscnet/dynamics.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>

#include "oscnet/errors.hpp"

namespace oscnet {

// --- IntrinsicTerm -----------------------------------------------------------

IntrinsicTerm IntrinsicTerm::zero() { return IntrinsicTerm{}; }

IntrinsicTerm IntrinsicTerm::feedback(double b, double ubar) {
    IntrinsicTerm f;
    f.kind_ = Kind::Feedback;
    f.b_ = b;
    f.ubar_ = ubar;
    f.lipschitz_ = std::abs(b);
    return f;
}

IntrinsicTerm IntrinsicTerm::callback(std::function<double(double, double)> fn, double lipschitz) {
    IntrinsicTerm f;
    f.kind_ = Kind::Callback;
    f.fn_ = std::move(fn);
    f.lipschitz_ = lipschitz;
    return f;
}

double IntrinsicTerm::operator()(double u, double t) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Feedback: return b_ * std::sin(ubar_ - u);
        case Kind::Callback: return fn_(u, t);
    }
    return 0.0;
}

// --- DiscreteSystem ----------------------------------------------------------

DiscreteSystem::DiscreteSystem(int n, std::vector<DynamicLayer> layers, IntrinsicTerm intrinsic,
                               std::optional<std::vector<double>> frequencies)
    : n_(n), layers_(std::move(layers)), intrinsic_(std::move(intrinsic)),
      freqs_(std::move(frequencies)) {
    if (n_ <= 0) throw DomainError("DiscreteSystem: n must be positive");
    if (layers_.empty()) throw DomainError("DiscreteSystem: at least one layer required");
    for (const auto& l : layers_) {
        if (l.matrix.n() != n_) throw DomainError("DiscreteSystem: layer size mismatch");
        if (!(l.matrix.alpha() > 0.0 && l.matrix.alpha() <= 1.0))
            throw DomainError("DiscreteSystem: alpha must lie in (0, 1]");
    }
    if (freqs_ && static_cast<int>(freqs_->size()) != n_)
        throw DomainError("DiscreteSystem: frequency vector size mismatch");
}

// --- parallel helper ---------------------------------------------------------

namespace {

// Persistent worker pool dispatching contiguous row chunks; results never
// depend on the split because chunks write disjoint output rows.
class RowPool {
public:
    explicit RowPool(int threads) : threads_(threads) {
        for (int t = 1; t < threads_; ++t)
            workers_.emplace_back([this, t] { worker_loop(t); });
    }

    ~RowPool() {
        {
            std::lock_guard<std::mutex> lock(mtx_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& w : workers_) w.join();
    }

    void run(int n, const std::function<void(int, int)>& fn) {
        if (threads_ <= 1 || n < threads_) {
            fn(0, n);
            return;
        }
        {
            std::lock_guard<std::mutex> lock(mtx_);
            fn_ = &fn;
            n_ = n;
            pending_ = threads_ - 1;
            ++generation_;
        }
        cv_.notify_all();
        fn(chunk_begin(0), chunk_begin(1)); // this thread takes chunk 0
        std::unique_lock<std::mutex> lock(mtx_);
        done_cv_.wait(lock, [this] { return pending_ == 0; });
        fn_ = nullptr;
    }

private:
    int chunk_begin(int k) const { return static_cast<int>(static_cast<long long>(n_) * k / threads_); }

    void worker_loop(int index) {
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(int, int)>* fn = nullptr;
            {
                std::unique_lock<std::mutex> lock(mtx_);
                cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                fn = fn_;
            }
            (*fn)(chunk_begin(index), chunk_begin(index + 1));
            {
                std::lock_guard<std::mutex> lock(mtx_);
                if (--pending_ == 0) done_cv_.notify_one();
            }
        }
    }

    int threads_;
    std::vector<std::thread> workers_;
    std::mutex mtx_;
    std::condition_variable cv_, done_cv_;
    const std::function<void(int, int)>* fn_ = nullptr;
    int n_ = 0;
    int pending_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
};

thread_local std::unique_ptr<RowPool> tls_pool;
thread_local int tls_pool_threads = 0;

RowPool& pool_for(int threads) {
    if (!tls_pool || tls_pool_threads != threads) {
        tls_pool = std::make_unique<RowPool>(threads);
        tls_pool_threads = threads;
    }
    return *tls_pool;
}

} // namespace

// --- RhsEvaluator -------------------------------------------------------------

RhsEvaluator::RhsEvaluator(const DiscreteSystem& sys, int threads)
    : sys_(sys), threads_(std::max(1, threads)) {
    const std::size_t n = static_cast<std::size_t>(sys.n());
    sinv_.resize(n);
    cosv_.resize(n);
    ya_.resize(n);
    yb_.resize(n);
    row_sums_.resize(sys.layers().size());
    for (std::size_t k = 0; k < sys.layers().size(); ++k)
        if (sys.layers()[k].coupling.is_constant())
            row_sums_[k] = sys.layers()[k].matrix.row_sums();
}

void RhsEvaluator::operator()(const std::vector<double>& u, double t, std::vector<double>& dudt) {
    const int n = sys_.n();
    if (static_cast<int>(u.size()) != n) throw DomainError("rhs: state size mismatch");
    dudt.resize(u.size());

    auto& pool = pool_for(threads_);

    const auto& intrinsic = sys_.intrinsic();
    const auto& freqs = sys_.frequencies();
    pool.run(n, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            dudt[i] = intrinsic(u[i], t) + (freqs ? (*freqs)[i] : 0.0);
    });

    for (std::size_t k = 0; k < sys_.layers().size(); ++k) {
        const auto& layer = sys_.layers()[k];
        const WeightMatrix& w = layer.matrix;
        const double coeff = 1.0 / (static_cast<double>(n) * w.alpha());
        const int harmonic = layer.coupling.harmonic();
        if (harmonic == 0) {
            // D == scale: only the row sums enter
            const double cs = coeff * layer.coupling.scale();
            const auto& sums = row_sums_[k];
            pool.run(n, [&](int lo, int hi) {
                for (int i = lo; i < hi; ++i) dudt[i] += cs * sums[i];
            });
            continue;
        }
        if (!factored_) {
            pool.run(n, [&](int lo, int hi) {
                w.accumulate_pairwise(u.data(), coeff, layer.coupling, dudt.data(), lo, hi);
            });
            continue;
        }
        // sin(c(u_j - u_i)) = sin(c u_j) cos(c u_i) - cos(c u_j) sin(c u_i)
        const double c = static_cast<double>(harmonic);
        pool.run(n, [&](int lo, int hi) {
            for (int i = lo; i < hi; ++i) {
                sinv_[i] = std::sin(c * u[i]);
                cosv_[i] = std::cos(c * u[i]);
            }
        });
        pool.run(n, [&](int lo, int hi) {
            w.dual_matvec(sinv_.data(), cosv_.data(), ya_.data(), yb_.data(), lo, hi);
        });
        const double cs = coeff * layer.coupling.scale();
        pool.run(n, [&](int lo, int hi) {
            for (int i = lo; i < hi; ++i) dudt[i] += cs * (cosv_[i] * ya_[i] - sinv_[i] * yb_[i]);
        });
    }
}

std::vector<double> rhs_discrete(const DiscreteSystem& sys, const PhaseState& state) {
    if (static_cast<int>(state.u.size()) != sys.n())
        throw DomainError("rhs_discrete: state size mismatch");
    RhsEvaluator eval(sys);
    std::vector<double> dudt;
    eval(state.u, state.t, dudt);
    return dudt;
}

DiscreteSystem averaged_system(const DiscreteSystem& sys) {
    std::vector<DynamicLayer> layers;
    layers.reserve(sys.layers().size());
    for (const auto& layer : sys.layers()) {
        if (layer.matrix.construction() == Construction::DeterministicDense) {
            layers.push_back(layer);
            continue;
        }
        if (!layer.provenance)
            throw DomainError("averaged_system: random layer lacks graphon provenance");
        const GraphLayer& src = *layer.provenance;
        const int n = sys.n();
        const double alpha = layer.matrix.alpha();
        auto gen = [&](int i, int j) {
            if (alpha >= 1.0) return src.graphon.cell_average(n, i + 1, j + 1);
            return src.graphon.truncated_cell_average(n, i + 1, j + 1, 1.0 / alpha);
        };
        WeightMatrix avg = WeightMatrix::from_generator(n, gen, 1.0,
                                                        Construction::DeterministicDense, {},
                                                        src.graphon.symmetric());
        layers.push_back(DynamicLayer{std::move(avg), layer.coupling, layer.provenance});
    }
    return DiscreteSystem(sys.n(), std::move(layers), sys.intrinsic(), sys.frequencies());
}

std::vector<double> rhs_averaged(const DiscreteSystem& sys, const PhaseState& state) {
    return rhs_discrete(averaged_system(sys), state);
}

// --- integrator ---------------------------------------------------------------

Trajectory integrate(const DiscreteSystem& sys, const PhaseState& initial, double t_end,
                     double dt, int sample_every, int threads) {
    if (!(dt > 0.0)) throw DomainError("integrate: dt must be positive");
    if (!(t_end > initial.t)) throw DomainError("integrate: t_end must exceed the initial time");
    if (sample_every < 1) throw DomainError("integrate: sample_every must be >= 1");
    if (static_cast<int>(initial.u.size()) != sys.n())
        throw DomainError("integrate: initial state size mismatch");

    const int n = sys.n();
    RhsEvaluator rhs(sys, threads);

    const double span = t_end - initial.t;
    long long full_steps = static_cast<long long>(std::floor(span / dt + 1e-12));
    double remainder = span - static_cast<double>(full_steps) * dt;
    if (remainder < 1e-12 * std::max(1.0, std::abs(t_end))) remainder = 0.0;

    Trajectory tr;
    tr.dt = dt;
    tr.sample_every = sample_every;
    tr.times.push_back(initial.t);
    tr.states.push_back(initial.u);

    std::vector<double> u = initial.u;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    auto rk4_step = [&](double t, double h) {
        rhs(u, t, k1);
        for (int i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
        rhs(tmp, t + 0.5 * h, k2);
        for (int i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
        rhs(tmp, t + 0.5 * h, k3);
        for (int i = 0; i < n; ++i) tmp[i] = u[i] + h * k3[i];
        rhs(tmp, t + h, k4);
        const double h6 = h / 6.0;
        for (int i = 0; i < n; ++i)
            u[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    };

    auto check_finite = [&](double t) {
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(u[i]))
                throw IntegrationError("integrate: non-finite state at t = " + std::to_string(t), t);
    };

    for (long long step = 1; step <= full_steps; ++step) {
        const double t_prev = initial.t + static_cast<double>(step - 1) * dt;
        rk4_step(t_prev, dt);
        const double t_now = initial.t + static_cast<double>(step) * dt;
        check_finite(t_now);
        const bool is_last = step == full_steps && remainder == 0.0;
        if (step % sample_every == 0 || is_last) {
            tr.times.push_back(is_last ? t_end : t_now);
            tr.states.push_back(u);
        }
    }
    if (remainder > 0.0) {
        rk4_step(initial.t + static_cast<double>(full_steps) * dt, remainder);
        check_finite(t_end);
        tr.times.push_back(t_end);
        tr.states.push_back(u);
    }
    return tr;
}

PhaseState initial_from_profile(const ScalarProfile& g, int n) {
    PhaseState s;
    s.t = 0.0;
    s.u = g.cell_averages(n);
    return s;
}

double discrete_l2_norm(std::span<const double> u) {
    if (u.empty()) return 0.0;
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::sqrt(s / static_cast<double>(u.size()));
}

} // namespace oscnet
