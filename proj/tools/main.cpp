#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oscnet/config.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/experiment.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "override the config seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--out", opts.out_dir, "override the output directory");
    cmd->add_option("--threads", opts.threads, "worker threads for RHS evaluation");
}

int run(const CommonOpts& opts, const std::vector<oscnet::ExperimentKind>& allowed) {
    oscnet::ExperimentConfig cfg = oscnet::load_config(opts.config_path);
    bool ok = false;
    for (auto k : allowed) ok = ok || cfg.kind == k;
    if (!ok)
        throw oscnet::ConfigError("config experiment kind '" + experiment_kind_name(cfg.kind) +
                                  "' does not match this subcommand");
    if (opts.seed_set) cfg.seed = opts.seed;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.threads > 0) cfg.threads = opts.threads;
    std::cout << oscnet::run_experiment(cfg);
    return 0;
}

int error_json(const std::string& type, const std::string& message, int code) {
    nlohmann::ordered_json j;
    j["error"]["type"] = type;
    j["error"]["message"] = message;
    std::cout << j.dump(2) << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled oscillator networks on multiple graphs: simulation and analysis"};
    app.require_subcommand(1);

    using K = oscnet::ExperimentKind;
    CommonOpts opts;

    auto* simulate = app.add_subcommand("simulate", "integrate a realized n-node system");
    auto* sync = app.add_subcommand("sync", "solve the synchronized-state self-consistency");
    auto* stability = app.add_subcommand("stability", "certify stability of a synchronized state");
    auto* design = app.add_subcommand("design", "determine a kernel for a prescribed profile");
    auto* sweep = app.add_subcommand("sweep", "parameter sweeps (delta, boundary, averaged)");
    auto* matrix = app.add_subcommand("matrix", "export a realized weight matrix");
    for (auto* cmd : {simulate, sync, stability, design, sweep, matrix}) add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run(opts, {K::Simulate});
        if (sync->parsed()) return run(opts, {K::SyncSolve});
        if (stability->parsed()) return run(opts, {K::Stability});
        if (design->parsed()) return run(opts, {K::Design});
        if (sweep->parsed()) return run(opts, {K::SweepDelta, K::SweepBoundary, K::AveragedCompare});
        if (matrix->parsed()) return run(opts, {K::Matrix});
    } catch (const oscnet::ConfigError& e) {
        return error_json("config", e.what(), 2);
    } catch (const oscnet::Error& e) {
        return error_json("runtime", e.what(), 3);
    } catch (const std::exception& e) {
        return error_json("internal", e.what(), 4);
    }
    return 0;
}
