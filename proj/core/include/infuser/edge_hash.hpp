#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "infuser/graph.hpp"

namespace infuser {

// Simulations processed together by one batched compare/select step.
inline constexpr std::size_t kLanes = 8;

// Hashes and per-simulation randoms are 31-bit so XOR results stay
// non-negative under signed 32-bit lane compares.
inline constexpr std::uint32_t kHashMax = 0x7FFFFFFFu;

// Bit b set <=> simulation r0 + b.
using LaneMask = std::uint8_t;

// MurmurHash3 x86_32, bit-exact with the reference algorithm.
std::uint32_t murmur3_32(std::span<const std::byte> key, std::uint32_t seed);
std::uint32_t murmur3_32(std::string_view key, std::uint32_t seed);

// Direction-oblivious edge hash: murmur3 (seed 0) of the 8-byte key
// LE32(min(u,v)) || LE32(max(u,v)), masked to 31 bits.
std::uint32_t edge_hash(VertexId u, VertexId v);

// floor(w * kHashMax) for w in [0,1].
std::uint32_t sampling_threshold(double w);

// XOR numerator of the per-simulation sampling probability.
constexpr std::uint32_t sample_prob(std::uint32_t hash, std::uint32_t x_r) noexcept { return hash ^ x_r; }

// Strict compare: w = 0 never samples, w = 1 samples all but prob == kHashMax.
constexpr bool in_sample(std::uint32_t prob, std::uint32_t threshold) noexcept { return prob < threshold; }

// Per-slot hashes and sampling thresholds, aligned with Graph::adj().
// Reciprocal slots carry identical values.
class EdgeHashTable {
 public:
  EdgeHashTable() = default;
  EdgeHashTable(std::vector<std::uint32_t> hashes, std::vector<std::uint32_t> thresholds);

  std::size_t size() const noexcept { return hashes_.size(); }
  std::uint32_t hash(EdgeSlot slot) const noexcept { return hashes_[slot]; }
  std::uint32_t threshold(EdgeSlot slot) const noexcept { return thresholds_[slot]; }
  std::span<const std::uint32_t> hashes() const noexcept { return hashes_; }
  std::span<const std::uint32_t> thresholds() const noexcept { return thresholds_; }
  static constexpr std::uint32_t h_max() noexcept { return kHashMax; }

 private:
  std::vector<std::uint32_t> hashes_;
  std::vector<std::uint32_t> thresholds_;
};

// Thresholds use Graph::undirected_weight so both directions agree.
EdgeHashTable build_hash_table(const Graph& g);

// One random X_r in [0, kHashMax] per simulation, padded to a multiple of
// kLanes. Padded lanes hold real randoms but are excluded from scoring.
class SimulationRandoms {
 public:
  SimulationRandoms() = default;
  SimulationRandoms(std::size_t simulations, std::uint64_t master_seed);

  // Explicit values (tests). Padded with zeros to a multiple of kLanes.
  static SimulationRandoms from_values(std::vector<std::uint32_t> values);

  std::size_t simulations() const noexcept { return simulations_; }
  std::size_t padded() const noexcept { return values_.size(); }
  std::size_t batches() const noexcept { return values_.size() / kLanes; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint32_t operator[](std::size_t r) const noexcept { return values_[r]; }
  std::span<const std::uint32_t> values() const noexcept { return values_; }

 private:
  std::vector<std::uint32_t> values_;
  std::size_t simulations_ = 0;
  std::uint64_t master_seed_ = 0;
};

std::size_t round_up_to_lanes(std::size_t r) noexcept;

// Lane b set iff (X[r0+b] ^ hash) < threshold. r0 must be a multiple of kLanes.
LaneMask lane_membership(std::uint32_t hash, std::uint32_t threshold, const SimulationRandoms& randoms,
                         std::size_t r0);
LaneMask lane_membership(EdgeSlot slot, std::size_t r0, double w, const EdgeHashTable& table,
                         const SimulationRandoms& randoms);
// Uses the table's own threshold for the slot.
LaneMask lane_membership(EdgeSlot slot, std::size_t r0, const EdgeHashTable& table,
                         const SimulationRandoms& randoms);

}  // namespace infuser
