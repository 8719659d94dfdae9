#include "infuser/edge_hash.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <random>

#include "infuser/error.hpp"
#include "lanes.hpp"

namespace infuser {

namespace {

std::uint32_t load_le32(const std::byte* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap32(v);
  return v;
}

std::uint32_t fmix32(std::uint32_t h) {
  h ^= h >> 16;
  h *= 0x85ebca6bu;
  h ^= h >> 13;
  h *= 0xc2b2ae35u;
  h ^= h >> 16;
  return h;
}

}  // namespace

std::uint32_t murmur3_32(std::span<const std::byte> key, std::uint32_t seed) {
  constexpr std::uint32_t c1 = 0xcc9e2d51u;
  constexpr std::uint32_t c2 = 0x1b873593u;
  const std::size_t nblocks = key.size() / 4;
  std::uint32_t h = seed;

  for (std::size_t i = 0; i < nblocks; ++i) {
    std::uint32_t k = load_le32(key.data() + 4 * i);
    k *= c1;
    k = std::rotl(k, 15);
    k *= c2;
    h ^= k;
    h = std::rotl(h, 13);
    h = h * 5 + 0xe6546b64u;
  }

  const std::byte* tail = key.data() + 4 * nblocks;
  std::uint32_t k = 0;
  switch (key.size() & 3) {
    case 3:
      k ^= std::to_integer<std::uint32_t>(tail[2]) << 16;
      [[fallthrough]];
    case 2:
      k ^= std::to_integer<std::uint32_t>(tail[1]) << 8;
      [[fallthrough]];
    case 1:
      k ^= std::to_integer<std::uint32_t>(tail[0]);
      k *= c1;
      k = std::rotl(k, 15);
      k *= c2;
      h ^= k;
  }

  h ^= static_cast<std::uint32_t>(key.size());
  return fmix32(h);
}

std::uint32_t murmur3_32(std::string_view key, std::uint32_t seed) {
  return murmur3_32(std::as_bytes(std::span(key.data(), key.size())), seed);
}

std::uint32_t edge_hash(VertexId u, VertexId v) {
  const VertexId lo = u < v ? u : v;
  const VertexId hi = u < v ? v : u;
  std::byte key[8];
  for (int i = 0; i < 4; ++i) {
    key[i] = static_cast<std::byte>((lo >> (8 * i)) & 0xff);
    key[4 + i] = static_cast<std::byte>((hi >> (8 * i)) & 0xff);
  }
  return murmur3_32(std::span<const std::byte>(key), 0) & kHashMax;
}

std::uint32_t sampling_threshold(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw ConstraintError("sampling weight outside [0,1]");
  return static_cast<std::uint32_t>(std::floor(w * static_cast<double>(kHashMax)));
}

EdgeHashTable::EdgeHashTable(std::vector<std::uint32_t> hashes, std::vector<std::uint32_t> thresholds)
    : hashes_(std::move(hashes)), thresholds_(std::move(thresholds)) {
  if (hashes_.size() != thresholds_.size()) throw ConstraintError("hash and threshold arrays differ in length");
}

EdgeHashTable build_hash_table(const Graph& g) {
  std::vector<std::uint32_t> hashes(g.m());
  std::vector<std::uint32_t> thresholds(g.m());
#pragma omp parallel for schedule(dynamic, 1024)
  for (std::int64_t u = 0; u < static_cast<std::int64_t>(g.n()); ++u) {
    const auto vu = static_cast<VertexId>(u);
    for (EdgeSlot s = g.slot_begin(vu); s < g.slot_end(vu); ++s) {
      hashes[s] = edge_hash(vu, g.target(s));
      // Graph guarantees weights in [0,1]; no throwing inside the parallel region.
      thresholds[s] = static_cast<std::uint32_t>(std::floor(g.undirected_weight(s) * static_cast<double>(kHashMax)));
    }
  }
  return EdgeHashTable(std::move(hashes), std::move(thresholds));
}

std::size_t round_up_to_lanes(std::size_t r) noexcept { return (r + kLanes - 1) / kLanes * kLanes; }

SimulationRandoms::SimulationRandoms(std::size_t simulations, std::uint64_t master_seed)
    : simulations_(simulations), master_seed_(master_seed) {
  if (simulations == 0) throw ConstraintError("need at least one simulation");
  std::mt19937_64 rng(master_seed);
  values_.resize(round_up_to_lanes(simulations));
  for (auto& x : values_) x = static_cast<std::uint32_t>(rng() >> 33) & kHashMax;
}

SimulationRandoms SimulationRandoms::from_values(std::vector<std::uint32_t> values) {
  if (values.empty()) throw ConstraintError("need at least one simulation");
  SimulationRandoms randoms;
  randoms.simulations_ = values.size();
  for (auto x : values) {
    if (x > kHashMax) throw ConstraintError("simulation random exceeds h_max");
  }
  values.resize(round_up_to_lanes(values.size()), 0);
  randoms.values_ = std::move(values);
  return randoms;
}

LaneMask lane_membership(std::uint32_t hash, std::uint32_t threshold, const SimulationRandoms& randoms,
                         std::size_t r0) {
  return detail::membership_mask(hash, threshold, randoms.values().data() + r0);
}

LaneMask lane_membership(EdgeSlot slot, std::size_t r0, double w, const EdgeHashTable& table,
                         const SimulationRandoms& randoms) {
  return lane_membership(table.hash(slot), sampling_threshold(w), randoms, r0);
}

LaneMask lane_membership(EdgeSlot slot, std::size_t r0, const EdgeHashTable& table,
                         const SimulationRandoms& randoms) {
  return lane_membership(table.hash(slot), table.threshold(slot), randoms, r0);
}

}  // namespace infuser
