#pragma once

// Internal batched lane primitives. Only included from core sources, which
// all share one set of compile flags.

#include <cstdint>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

#include "infuser/edge_hash.hpp"

namespace infuser::detail {

inline LaneMask membership_mask(std::uint32_t hash, std::uint32_t threshold, const std::uint32_t* x) noexcept {
#if defined(__AVX2__)
  const __m256i xr = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x));
  const __m256i probs = _mm256_xor_si256(_mm256_set1_epi32(static_cast<int>(hash)), xr);
  const __m256i select = _mm256_cmpgt_epi32(_mm256_set1_epi32(static_cast<int>(threshold)), probs);
  return static_cast<LaneMask>(_mm256_movemask_ps(_mm256_castsi256_ps(select)));
#else
  unsigned mask = 0;
  for (unsigned b = 0; b < kLanes; ++b) mask |= static_cast<unsigned>(in_sample(sample_prob(hash, x[b]), threshold)) << b;
  return static_cast<LaneMask>(mask);
#endif
}

// Lanes where `from` holds a strictly smaller label than `to`.
inline LaneMask smaller_mask(const std::int32_t* from, const std::int32_t* to) noexcept {
#if defined(__AVX2__)
  const __m256i lu = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(from));
  const __m256i lv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(to));
  const __m256i mask = _mm256_cmpgt_epi32(lv, lu);
  return static_cast<LaneMask>(_mm256_movemask_ps(_mm256_castsi256_ps(mask)));
#else
  unsigned mask = 0;
  for (unsigned b = 0; b < kLanes; ++b) mask |= static_cast<unsigned>(from[b] < to[b]) << b;
  return static_cast<LaneMask>(mask);
#endif
}

}  // namespace infuser::detail
