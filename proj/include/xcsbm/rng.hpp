#pragma once

#include <cstdint>
#include <random>

namespace xcsbm {

/// Engine used for every sampled quantity in the library.
using Engine = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent sub-seed from a parent seed and a stream tag.
///
/// Sub-seed derivation is the only way seeds flow through the library:
///   trial seed  -> derive_seed(trial, stream::data)  -> feature sampler
///   trial seed  -> derive_seed(trial, stream::graph) -> SBM sampler
///   graph seed  -> derive_seed(graph, row)           -> one stream per SBM row
/// so any piece of a trial can be regenerated without replaying the others.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept;

namespace stream {
inline constexpr std::uint64_t data = 0x64617461ULL;     // "data"
inline constexpr std::uint64_t graph = 0x67726170ULL;    // "grap"
inline constexpr std::uint64_t split = 0x73706c74ULL;    // "splt"
inline constexpr std::uint64_t init = 0x696e6974ULL;     // "init"
inline constexpr std::uint64_t dropout = 0x64726f70ULL;  // "drop"
inline constexpr std::uint64_t pairs = 0x70616972ULL;    // "pair"
}  // namespace stream

inline Engine make_engine(std::uint64_t seed) { return Engine(mix64(seed)); }

}  // namespace xcsbm
