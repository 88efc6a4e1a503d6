#include "oscnet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "oscnet/analysis.hpp"
#include "oscnet/circular.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/io.hpp"
#include "oscnet/rng.hpp"

namespace oscnet {

using json = nlohmann::ordered_json;

namespace {

DiscreteSystem realize_system(const ExperimentConfig& cfg, int n, std::uint64_t seed) {
    std::vector<DynamicLayer> layers;
    for (const auto& gl : cfg.layers) {
        WeightMatrix wm = realize(gl, n, seed);
        layers.push_back(DynamicLayer{std::move(wm), gl.coupling, gl});
    }
    std::optional<std::vector<double>> freqs;
    if (cfg.omega) freqs = cfg.omega->cell_averages(n);
    return DiscreteSystem(n, std::move(layers), cfg.intrinsic, std::move(freqs));
}

/// The rank-1 view of the first layer's kernel, when one exists (constant
/// kernels are H1 = p, H2 = 1).
std::optional<Graphon> rank1_view(const Graphon& g) {
    if (g.kind() == Graphon::Kind::Rank1) return g;
    if (g.kind() == Graphon::Kind::Constant && g.constant_value() > 0.0)
        return Graphon::rank1(ScalarProfile::constant(g.constant_value()),
                              ScalarProfile::constant(1.0));
    return std::nullopt;
}

std::optional<SyncSolution> try_sync_solution(const ExperimentConfig& cfg) {
    if (cfg.layers.empty()) return std::nullopt;
    auto r1 = rank1_view(cfg.layers.front().graphon);
    if (!r1) return std::nullopt;
    const ScalarProfile omega = cfg.omega ? *cfg.omega : ScalarProfile::constant(0.0);
    try {
        SyncSolution sol = solve_order_parameter_general(*r1, omega);
        if (sol.exists) sol = continuum_stability_check(sol, *r1);
        return sol;
    } catch (const Error&) {
        return std::nullopt;
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

json sync_to_json(const SyncSolution& sol) {
    json j;
    j["exists"] = sol.exists;
    j["omega"] = sol.omega_cap;
    j["order_parameter"] = sol.order_param;
    j["roots"] = sol.all_roots;
    j["stability"] = stability_name(sol.stability);
    j["certificate"] = sol.certificate;
    return j;
}

std::string write_summary(const ExperimentConfig& cfg, json& summary) {
    summary["experiment"] = experiment_kind_name(cfg.kind);
    summary["name"] = cfg.name;
    summary["seed"] = cfg.seed;
    const std::string text = summary.dump(2) + "\n";
    std::ofstream out(cfg.out_dir / "summary.json");
    if (!out) throw Error("cannot write summary.json under " + cfg.out_dir.string());
    out << text;
    return text;
}

std::string run_simulate(const ExperimentConfig& cfg) {
    const int n = cfg.n;
    DiscreteSystem sys = realize_system(cfg, n, cfg.seed);
    PhaseState init;
    init.t = 0.0;
    init.u = cfg.initial.realize(n, cfg.seed);
    Trajectory tr = integrate(sys, init, cfg.t_end, cfg.dt, cfg.sample_every, cfg.threads);

    write_trajectory_csv(tr, cfg.out_dir / "trajectory.csv");
    write_snapshot_csv(tr.final_state(), tr.final_time(), cfg.out_dir / "snapshot.csv");

    json summary;
    summary["n"] = n;
    summary["t_end"] = cfg.t_end;
    summary["dt"] = cfg.dt;
    summary["theta_circular"] = circular_mean(tr.final_state());
    summary["theta_arithmetic"] = mean_of(tr.final_state());
    summary["order_parameter_r"] = resultant_length(tr.final_state());
    summary["circular_variance"] = circular_variance(tr.final_state());
    summary["dominant_mode"] = dominant_fourier_mode(tr.final_state());

    if (cfg.report_delta_vs_sync) {
        auto sol = try_sync_solution(cfg);
        if (sol && sol->exists) {
            const auto profile = sol->profile_on_mesh(n);
            summary["sync"] = sync_to_json(*sol);
            summary["delta_n"] = delta_n(tr.final_state(), profile);
        } else {
            summary["sync"] = nullptr;
        }
    }
    return write_summary(cfg, summary);
}

std::string run_sync_solve(const ExperimentConfig& cfg) {
    auto r1 = rank1_view(cfg.layers.front().graphon);
    if (!r1) throw DomainError("sync-solve: first layer kernel must be rank-1 (or constant)");
    const ScalarProfile omega = cfg.omega ? *cfg.omega : ScalarProfile::constant(0.0);
    SyncSolution sol = solve_order_parameter_general(*r1, omega);
    if (sol.exists) sol = continuum_stability_check(sol, *r1);

    json summary;
    summary["continuum"] = sync_to_json(sol);
    if (cfg.n > 0 && sol.exists) {
        GraphLayer dense = GraphLayer::deterministic_dense(*r1, cfg.layers.front().coupling, 1);
        WeightMatrix wm = build_deterministic_dense(dense, cfg.n);
        std::optional<std::vector<double>> freqs = omega.cell_averages(cfg.n);
        DiscreteSystem sys(cfg.n, {DynamicLayer{std::move(wm), dense.coupling, dense}},
                           IntrinsicTerm::zero(), std::move(freqs));
        DiscreteSyncProfile d = sync_profile_discrete(sys, sol);
        json dj;
        dj["n"] = cfg.n;
        dj["exists"] = d.exists;
        dj["omega"] = d.omega_cap;
        dj["order_parameter"] = d.order_param;
        summary["discrete"] = dj;
    }
    return write_summary(cfg, summary);
}

std::string run_stability(const ExperimentConfig& cfg) {
    auto r1 = rank1_view(cfg.layers.front().graphon);
    if (!r1) throw DomainError("stability: first layer kernel must be rank-1 (or constant)");
    const ScalarProfile omega = cfg.omega ? *cfg.omega : ScalarProfile::constant(0.0);
    SyncSolution sol = solve_order_parameter_general(*r1, omega);
    if (!sol.exists) throw DomainError("stability: no synchronized solution exists");
    sol = continuum_stability_check(sol, *r1);

    GraphLayer dense = GraphLayer::deterministic_dense(*r1, cfg.layers.front().coupling, 1);
    WeightMatrix wm = build_deterministic_dense(dense, cfg.n);
    std::optional<std::vector<double>> freqs = omega.cell_averages(cfg.n);
    DiscreteSystem sys(cfg.n, {DynamicLayer{std::move(wm), dense.coupling, dense}},
                       IntrinsicTerm::zero(), std::move(freqs));
    DiscreteSyncProfile d = sync_profile_discrete(sys, sol);
    if (!d.exists) throw DomainError("stability: discrete self-consistency has no root");
    SpectrumReport rep = discrete_stability_check(sys, d.profile);

    json summary;
    summary["continuum"] = sync_to_json(sol);
    json dj;
    dj["n"] = cfg.n;
    dj["omega"] = d.omega_cap;
    dj["order_parameter"] = d.order_param;
    dj["gershgorin_certified"] = rep.gershgorin_certified;
    dj["max_disc_reach"] = rep.max_disc_reach;
    dj["profile_within_quarter_pi"] = rep.profile_within_quarter_pi;
    if (rep.kernel_test_available) dj["kernel_test_value"] = rep.kernel_test_value;
    dj["kernel_dimension_one"] = rep.kernel_dimension_one;
    if (rep.eigenvalues_computed) {
        dj["max_real_eigenvalue"] = rep.max_real_eigenvalue;
        dj["numeric_kernel_dimension"] = rep.numeric_kernel_dimension;
    }
    dj["verdict"] = stability_name(rep.verdict);
    summary["discrete"] = dj;
    return write_summary(cfg, summary);
}

std::string run_design(const ExperimentConfig& cfg) {
    DesignResult res = inverse_design(cfg.design.u0, cfg.design.omega, cfg.design.omega0,
                                      cfg.design.i_plus, cfg.design.i_minus);
    json summary;
    summary["h2_plus"] = res.h2_plus;
    summary["h2_minus"] = res.h2_minus;
    summary["c0"] = res.c0;
    summary["conditions"] = {{"sign_sets", res.cond_sign_sets},
                             {"aligned", res.cond_aligned},
                             {"zero_match", res.cond_zero_match}};

    // sampled factor profiles for plotting
    {
        std::ofstream out(cfg.out_dir / "kernel_profiles.csv");
        out << "x,h1,h2\n";
        const int grid = 1024;
        for (int k = 0; k < grid; ++k) {
            const double x = (k + 0.5) / grid;
            out << format_double(x) << ',' << format_double(res.h1(x)) << ','
                << format_double(res.h2(x)) << '\n';
        }
    }
    if (cfg.n > 0) {
        GraphLayer layer = GraphLayer::deterministic_dense(res.kernel, CouplingFunction::sine(), 1);
        WeightMatrix wm = build_deterministic_dense(layer, cfg.n);
        if (cfg.matrix_format == "csv")
            write_matrix_csv(wm, cfg.out_dir / "matrix.csv");
        else if (cfg.matrix_format == "bin")
            write_matrix_binary(wm, cfg.out_dir / "matrix.bin");
        else
            write_matrix_pgm(wm, cfg.out_dir / "matrix.pgm");
        summary["matrix_n"] = cfg.n;
    }
    return write_summary(cfg, summary);
}

std::string run_sweep_delta(const ExperimentConfig& cfg) {
    auto sol = try_sync_solution(cfg);
    if (!sol || !sol->exists)
        throw DomainError("sweep-delta: no synchronized solution for the configured system");

    std::ofstream csv(cfg.out_dir / "delta_sweep.csv");
    csv << "n,replicate,seed,delta_n\n";

    json per_n = json::array();
    std::vector<double> medians;
    for (int n : cfg.n_list) {
        const auto profile = sol->profile_on_mesh(n);
        std::vector<double> deltas;
        for (int r = 0; r < cfg.replicates; ++r) {
            const std::uint64_t seed_nr = derive_seed(cfg.seed, static_cast<std::uint64_t>(n),
                                                      static_cast<std::uint64_t>(r));
            DiscreteSystem sys = realize_system(cfg, n, seed_nr);
            PhaseState init;
            init.u = cfg.initial.realize(n, seed_nr);
            Trajectory tr = integrate(sys, init, cfg.t_end, cfg.dt,
                                      std::max(1, static_cast<int>(cfg.t_end / cfg.dt)), cfg.threads);
            const double d = delta_n(tr.final_state(), profile);
            deltas.push_back(d);
            csv << n << ',' << r << ',' << seed_nr << ',' << format_double(d) << '\n';
        }
        const double med = median(deltas);
        medians.push_back(med);
        json row;
        row["n"] = n;
        row["median_delta_n"] = med;
        row["deltas"] = deltas;
        per_n.push_back(row);
    }
    bool decreasing = true;
    for (std::size_t k = 0; k + 1 < medians.size(); ++k)
        if (!(medians[k + 1] < medians[k])) decreasing = false;

    json summary;
    summary["sync"] = sync_to_json(*sol);
    summary["per_n"] = per_n;
    summary["medians_strictly_decreasing"] = decreasing;
    return write_summary(cfg, summary);
}

std::string run_averaged_compare(const ExperimentConfig& cfg) {
    std::ofstream csv(cfg.out_dir / "averaged_compare.csv");
    csv << "n,replicate,seed,max_diff_norm\n";

    json per_n = json::array();
    std::vector<double> medians;
    for (int n : cfg.n_list) {
        std::vector<double> maxima;
        for (int r = 0; r < cfg.replicates; ++r) {
            const std::uint64_t seed_nr = derive_seed(cfg.seed, static_cast<std::uint64_t>(n),
                                                      static_cast<std::uint64_t>(r));
            DiscreteSystem sys = realize_system(cfg, n, seed_nr);
            DiscreteSystem avg = averaged_system(sys);
            PhaseState init;
            init.u = cfg.initial.realize(n, seed_nr);
            Trajectory tu = integrate(sys, init, cfg.t_end, cfg.dt, cfg.sample_every, cfg.threads);
            Trajectory tv = integrate(avg, init, cfg.t_end, cfg.dt, cfg.sample_every, cfg.threads);
            double worst = 0.0;
            std::vector<double> diff(static_cast<std::size_t>(n));
            for (std::size_t k = 0; k < tu.states.size(); ++k) {
                for (int i = 0; i < n; ++i) diff[i] = tu.states[k][i] - tv.states[k][i];
                worst = std::max(worst, discrete_l2_norm(diff));
            }
            maxima.push_back(worst);
            csv << n << ',' << r << ',' << seed_nr << ',' << format_double(worst) << '\n';
        }
        const double med = median(maxima);
        medians.push_back(med);
        json row;
        row["n"] = n;
        row["median_max_diff"] = med;
        row["maxima"] = maxima;
        per_n.push_back(row);
    }
    int inversions = 0;
    for (std::size_t k = 0; k + 1 < medians.size(); ++k)
        if (!(medians[k + 1] < medians[k])) ++inversions;

    json summary;
    summary["per_n"] = per_n;
    summary["median_inversions"] = inversions;
    return write_summary(cfg, summary);
}

std::string run_sweep_boundary(const ExperimentConfig& cfg) {
    const auto& b = cfg.boundary;
    if (!(b.kappa_min > 0.0 && b.kappa_max <= 0.5 && b.kappa_max > b.kappa_min))
        throw ConfigError("boundary: kappa range must satisfy 0 < kappa_min < kappa_max <= 1/2");
    std::ofstream csv(cfg.out_dir / "boundary.csv");
    csv << "kappa,l,neg_kappa_K_crit,K_crit\n";
    std::ofstream weakest_csv(cfg.out_dir / "boundary_weakest.csv");
    weakest_csv << "kappa,l_weakest,K_crit\n";
    for (int s = 0; s < b.kappa_steps; ++s) {
        const double kappa =
            b.kappa_min + (b.kappa_max - b.kappa_min) * s / std::max(1, b.kappa_steps - 1);
        for (int l = 1; l <= b.l_max; ++l) {
            const RingPairBoundary rb = ring_pair_boundary(kappa, l);
            csv << format_double(kappa) << ',' << l << ',' << format_double(rb.neg_kappa_k) << ','
                << format_double(rb.k_critical) << '\n';
        }
        const RingPairBoundary wk = ring_pair_weakest_boundary(kappa, b.l_max);
        weakest_csv << format_double(kappa) << ',' << wk.l << ',' << format_double(wk.k_critical)
                    << '\n';
    }
    json summary;
    summary["kappa_steps"] = b.kappa_steps;
    summary["l_max"] = b.l_max;
    return write_summary(cfg, summary);
}

std::string run_matrix(const ExperimentConfig& cfg) {
    const GraphLayer& layer = cfg.layers.front();
    WeightMatrix wm = realize(layer, cfg.n, cfg.seed);
    if (cfg.matrix_format == "csv")
        write_matrix_csv(wm, cfg.out_dir / "matrix.csv");
    else if (cfg.matrix_format == "bin")
        write_matrix_binary(wm, cfg.out_dir / "matrix.bin");
    else
        write_matrix_pgm(wm, cfg.out_dir / "matrix.pgm");

    const DegreeStats deg = degree_stats(wm);
    json summary;
    summary["n"] = cfg.n;
    summary["alpha"] = wm.alpha();
    summary["construction"] = construction_name(wm.construction());
    summary["edges"] = wm.nonzero_count();
    summary["mean_in_degree"] = mean_of(deg.in_degrees);
    summary["mean_out_degree"] = mean_of(deg.out_degrees);
    return write_summary(cfg, summary);
}

} // namespace

std::string run_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    switch (cfg.kind) {
        case ExperimentKind::Simulate: return run_simulate(cfg);
        case ExperimentKind::SyncSolve: return run_sync_solve(cfg);
        case ExperimentKind::Stability: return run_stability(cfg);
        case ExperimentKind::Design: return run_design(cfg);
        case ExperimentKind::SweepDelta: return run_sweep_delta(cfg);
        case ExperimentKind::SweepBoundary: return run_sweep_boundary(cfg);
        case ExperimentKind::AveragedCompare: return run_averaged_compare(cfg);
        case ExperimentKind::Matrix: return run_matrix(cfg);
    }
    throw Error("run_experiment: unknown kind");
}

} // namespace oscnet
