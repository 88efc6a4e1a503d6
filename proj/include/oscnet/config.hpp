#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oscnet/continuum.hpp"
#include "oscnet/dynamics.hpp"
#include "oscnet/network.hpp"

namespace oscnet {

enum class ExperimentKind {
    Simulate,
    SyncSolve,
    Stability,
    Design,
    SweepDelta,
    SweepBoundary,
    AveragedCompare,
    Matrix,
};

std::string experiment_kind_name(ExperimentKind k);

/// Initial condition recipe.
struct InitialSpec {
    enum class Kind { Profile, UniformRandom, NearConstant } kind = Kind::Profile;
    ScalarProfile profile;       // Profile
    double lo = 0.0, hi = 0.0;   // UniformRandom
    double q = 0.0, amplitude = 0.0; // NearConstant

    std::vector<double> realize(int n, std::uint64_t seed) const;
};

struct DesignSpec {
    ScalarProfile u0;
    ScalarProfile omega;
    double omega0 = 0.0;
    std::vector<std::pair<double, double>> i_plus, i_minus;
};

struct SweepBoundarySpec {
    double kappa_min = 0.05, kappa_max = 0.5;
    int kappa_steps = 46;
    int l_max = 7;
};

/// Parsed experiment description. `system` describes layers/intrinsic/omega;
/// matrices are realized per run from the seed.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Simulate;
    std::string name = "experiment";

    std::vector<GraphLayer> layers;
    IntrinsicTerm intrinsic = IntrinsicTerm::zero();
    std::optional<ScalarProfile> omega;
    InitialSpec initial;

    int n = 0;
    std::vector<int> n_list;
    double dt = 0.01;
    double t_end = 50.0;
    int sample_every = 100;
    int n_mesh = 512;
    double tolerance = 1e-10;
    int replicates = 3; // seeds per n in sweeps
    bool report_delta_vs_sync = false;
    bool wrap_snapshot = false;

    DesignSpec design;
    SweepBoundarySpec boundary;
    std::string matrix_format = "pgm"; // pgm | csv | bin

    std::uint64_t seed = 0;
    std::filesystem::path out_dir = ".";
    int threads = 1;
};

/// Parse a config file (JSON; see configs/schema.md). Throws ConfigError with
/// a field path or parser diagnostics.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");

} // namespace oscnet
