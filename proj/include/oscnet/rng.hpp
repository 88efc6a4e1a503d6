#pragma once

#include <cstdint>

namespace oscnet {

// Counter-based randomness: every draw is a pure function of its key, so
// sampling order, storage layout and thread count cannot change results.

/// SplitMix64 finalizer. Full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Chain two values into one key.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ b);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b) ^ c);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return mix64(mix64(a, b, c) ^ d);
}

/// Uniform double in [0, 1) from a 64-bit word (53 mantissa bits).
inline double to_unit_double(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Stream tag reserved for initial-condition draws (never a layer id).
inline constexpr std::uint64_t kInitStream = 0xffffffffULL;

/// Uniform [0,1) draw for edge (i, j) of layer `layer` under `seed`.
inline double edge_uniform(std::uint64_t seed, std::uint32_t layer, std::uint64_t i, std::uint64_t j) {
    return to_unit_double(mix64(seed, layer, i, j));
}

/// Uniform draw on [lo, hi) for node i's initial phase.
inline double node_uniform(std::uint64_t seed, std::uint64_t i, double lo, double hi) {
    return lo + (hi - lo) * to_unit_double(mix64(seed, kInitStream, i));
}

/// Derive a sub-seed, e.g. per (n, replicate) in sweeps.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(seed, a, b);
}

} // namespace oscnet
