// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "sqdrift/errors.hpp"

namespace sqdrift {

/// Counter-based splittable random generator (SplitMix64 core).
///
/// Every stream is identified by a 64-bit key derived from the master seed
/// and a path of stream indices, so independent jobs — (time index,
/// realization index, shot batch) — draw from disjoint, order-independent
/// streams. All draws are pure integer arithmetic; no libc rand state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ kGamma)), counter_(0) {}

  /// Child stream addressed by `path` relative to this stream.
  Rng derive(std::initializer_list<std::uint64_t> path) const {
    std::uint64_t k = key_;
    for (std::uint64_t w : path) k = mix(k ^ (mix(w + kGamma) + 0x517cc1b727220a95ull));
    return Rng(k, 0, internal_tag{});
  }

  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = key_ + (++counter_) * kGamma;
    return mix(z);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, bound) via rejection.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Index draw from an inclusive-prefix-sum table (last entry = total mass).
  std::size_t sample_cdf(std::span<const double> cdf) {
    if (cdf.empty()) throw ArgumentError("sample_cdf: empty table");
    const double total = cdf.back();
    if (!(total > 0.0)) throw ArgumentError("sample_cdf: non-positive total mass");
    const double u = next_double() * total;
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] <= u)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

 private:
  struct internal_tag {};
  Rng(std::uint64_t key, std::uint64_t counter, internal_tag) : key_(key), counter_(counter) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace sqdrift
