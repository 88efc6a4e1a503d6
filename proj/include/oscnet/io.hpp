#pragma once

#include <filesystem>
#include <string>

#include "oscnet/dynamics.hpp"
#include "oscnet/network.hpp"

namespace oscnet {

// Floats in text outputs are printed with 17 significant digits so that
// reruns are byte-comparable.
std::string format_double(double v);

// --- weight matrices -------------------------------------------------------

/// Binary row-major format: magic "OSCW", u32 version, u64 n, f64 alpha,
/// u32 construction tag, u8 has_seed, (u64 seed, u32 layer_id), then n*n f64
/// little-endian entries.
void write_matrix_binary(const WeightMatrix& wm, const std::filesystem::path& path);
WeightMatrix read_matrix_binary(const std::filesystem::path& path);

/// CSV edge list "i,j,w" (1-based, nonzero entries, row-major order).
void write_matrix_csv(const WeightMatrix& wm, const std::filesystem::path& path);

/// PGM (P5) pixel picture, one pixel per entry: white for w = 0, darker for
/// larger weights (scaled by the maximum entry).
void write_matrix_pgm(const WeightMatrix& wm, const std::filesystem::path& path);

// --- trajectories ----------------------------------------------------------

/// CSV with header t,u1,...,un.
void write_trajectory_csv(const Trajectory& tr, const std::filesystem::path& path);

/// Binary: magic "OSCT", u32 version, u64 n, u64 samples, f64 dt, then per
/// sample (f64 t, n f64 values).
void write_trajectory_binary(const Trajectory& tr, const std::filesystem::path& path);
Trajectory read_trajectory_binary(const std::filesystem::path& path);

/// Snapshot of one state: CSV with header i,x,u (x the cell midpoint).
void write_snapshot_csv(const std::vector<double>& u, double t, const std::filesystem::path& path);

} // namespace oscnet
