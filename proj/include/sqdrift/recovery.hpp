// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "sqdrift/determinant.hpp"
#include "sqdrift/errors.hpp"
#include "sqdrift/rng.hpp"
#include "sqdrift/statevector.hpp"

namespace sqdrift {

/// Per-orbital, per-spin occupation probabilities; the self-consistency
/// quantity fed back into configuration recovery.
struct OccupancyProfile {
  std::vector<double> alpha_occ;
  std::vector<double> beta_occ;
};

/// Reference-determinant profile smoothed to 0.9 / 0.1, so recovery can
/// still flip at reference-occupied orbitals before a first eigenvector
/// exists.
inline OccupancyProfile initial_occupancy_profile(const Determinant& reference, int n_orbitals) {
  OccupancyProfile p;
  p.alpha_occ.resize(n_orbitals);
  p.beta_occ.resize(n_orbitals);
  for (int q = 0; q < n_orbitals; ++q) {
    p.alpha_occ[q] = ((reference.alpha >> q) & 1) ? 0.9 : 0.1;
    p.beta_occ[q] = ((reference.beta >> q) & 1) ? 0.9 : 0.1;
  }
  return p;
}

struct SplitResult {
  std::vector<std::pair<Determinant, std::uint64_t>> valid;      // weight = shot count
  std::vector<std::pair<std::uint64_t, std::uint64_t>> invalid;  // raw bitstring, count
};

/// Splits blocked bitstrings into (alpha, beta) and routes by per-spin
/// Hamming weight.
inline SplitResult split_and_filter(const SampleSet& samples, int n_alpha, int n_beta) {
  if (samples.n_qubits % 2 != 0)
    throw ArgumentError("split_and_filter: bitstring length must be 2 * n_orbitals");
  const int n_orb = samples.n_qubits / 2;
  const std::uint64_t low = n_orb == 0 ? 0ull : (~0ull >> (64 - n_orb));
  SplitResult out;
  for (const auto& [bits, count] : samples.counts) {
    const Determinant d{bits & low, (bits >> n_orb) & low};
    if (d.n_alpha() == n_alpha && d.n_beta() == n_beta)
      out.valid.push_back({d, count});
    else
      out.invalid.push_back({bits, count});
  }
  return out;
}

struct RecoveryResult {
  std::vector<std::pair<Determinant, std::uint64_t>> recovered;
  std::uint64_t uniform_fallbacks = 0;  // flips where the profile gave zero weight
};

namespace detail {

/// Flips bits of one spin string until its Hamming weight matches `target`.
/// Excess occupation drops occupied bits with weight (1 - occ); deficits add
/// empty bits with weight occ.
inline std::uint64_t repair_spin_string(std::uint64_t s, int target, int n_orbitals,
                                        const std::vector<double>& occ, Rng& rng,
                                        std::uint64_t& fallbacks) {
  while (std::popcount(s) != target) {
    const bool excess = std::popcount(s) > target;
    std::vector<int> candidates;
    std::vector<double> weight;
    double total = 0.0;
    for (int q = 0; q < n_orbitals; ++q) {
      const bool occupied = (s >> q) & 1;
      if (occupied != excess) continue;
      candidates.push_back(q);
      const double w = excess ? 1.0 - occ[q] : occ[q];
      weight.push_back(w > 0.0 ? w : 0.0);
      total += weight.back();
    }
    int flip;
    if (total > 0.0) {
      std::vector<double> cdf(weight.size());
      double acc = 0.0;
      for (std::size_t i = 0; i < weight.size(); ++i) cdf[i] = (acc += weight[i]);
      flip = candidates[rng.sample_cdf(cdf)];
    } else {
      ++fallbacks;
      flip = candidates[rng.next_below(candidates.size())];
    }
    s ^= 1ull << flip;
  }
  return s;
}

}  // namespace detail

/// Repairs symmetry-violating bitstrings copy by copy, so one raw bitstring
/// can fan out into several recovered determinants.
inline RecoveryResult recover_configurations(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& invalid, int n_alpha, int n_beta,
    const OccupancyProfile& profile, Rng rng) {
  const int n_orbitals = static_cast<int>(profile.alpha_occ.size());
  if (profile.beta_occ.size() != profile.alpha_occ.size())
    throw ArgumentError("recover_configurations: profile spin sectors differ in length");
  const std::uint64_t low = n_orbitals == 0 ? 0ull : (~0ull >> (64 - n_orbitals));

  RecoveryResult out;
  std::map<Determinant, std::uint64_t> merged;
  std::uint64_t raw_index = 0;
  for (const auto& [bits, count] : invalid) {
    Rng stream = rng.derive({raw_index++});
    for (std::uint64_t copy = 0; copy < count; ++copy) {
      Determinant d{bits & low, (bits >> n_orbitals) & low};
      d.alpha = detail::repair_spin_string(d.alpha, n_alpha, n_orbitals, profile.alpha_occ,
                                           stream, out.uniform_fallbacks);
      d.beta = detail::repair_spin_string(d.beta, n_beta, n_orbitals, profile.beta_occ, stream,
                                          out.uniform_fallbacks);
      ++merged[d];
    }
  }
  out.recovered.assign(merged.begin(), merged.end());
  return out;
}

/// Union of `fresh` with the `keep` highest-|amplitude| previous determinants
/// (ties by bitstring order). Output is sorted and deduplicated.
inline std::vector<Determinant> carry_over(
    std::vector<std::pair<Determinant, double>> previous,
    const std::vector<std::pair<Determinant, std::uint64_t>>& fresh, std::size_t keep) {
  std::stable_sort(previous.begin(), previous.end(), [](const auto& a, const auto& b) {
    const double wa = std::abs(a.second), wb = std::abs(b.second);
    if (wa != wb) return wa > wb;
    return a.first < b.first;
  });
  std::vector<Determinant> out;
  out.reserve(fresh.size() + std::min(keep, previous.size()));
  for (const auto& [d, w] : fresh) out.push_back(d);
  for (std::size_t i = 0; i < previous.size() && i < keep; ++i) out.push_back(previous[i].first);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// occ_p = sum_i |c_i|^2 [orbital p occupied in det_i], per spin.
inline OccupancyProfile estimate_occupancies(const std::vector<Determinant>& dets,
                                             const std::vector<double>& coeffs, int n_orbitals) {
  if (dets.size() != coeffs.size())
    throw ArgumentError("estimate_occupancies: determinant/coefficient size mismatch");
  double norm2 = 0.0;
  for (double c : coeffs) norm2 += c * c;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6)
    throw ArgumentError("estimate_occupancies: coefficients are not normalized");
  OccupancyProfile p;
  p.alpha_occ.assign(n_orbitals, 0.0);
  p.beta_occ.assign(n_orbitals, 0.0);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const double w = coeffs[i] * coeffs[i];
    for (int q = 0; q < n_orbitals; ++q) {
      if ((dets[i].alpha >> q) & 1) p.alpha_occ[q] += w;
      if ((dets[i].beta >> q) & 1) p.beta_occ[q] += w;
    }
  }
  return p;
}

}  // namespace sqdrift
