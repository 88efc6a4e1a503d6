#pragma once

#include "oscnet/config.hpp"

namespace oscnet {

/// Run one experiment; writes its artifact files (trajectory/snapshot CSVs,
/// summary.json, matrix exports) under config.out_dir. Returns the summary as
/// a JSON string (the same bytes written to summary.json). Identical
/// config+seed produce identical bytes in every artifact.
std::string run_experiment(const ExperimentConfig& config);

} // namespace oscnet
