// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sqdrift/determinant.hpp"
#include "sqdrift/errors.hpp"
#include "sqdrift/slater_condon.hpp"
#include "sqdrift/subspace.hpp"

namespace sqdrift {

enum class ExcitationLevel { singles, singles_doubles };

struct ExtensionConfig {
  std::size_t cap = 1;  // per-spin string count (product) or determinant count (explicit)
  ExcitationLevel level = ExcitationLevel::singles_doubles;
  SubspaceBasis::Mode mode = SubspaceBasis::Mode::explicit_list;
};

namespace detail {

template <typename Fn>
void for_each_excitation(const Determinant& d, int n_orbitals, ExcitationLevel level, Fn&& fn) {
  std::vector<int> occ_a, vir_a, occ_b, vir_b;
  for (int p = 0; p < n_orbitals; ++p) {
    ((d.alpha >> p) & 1 ? occ_a : vir_a).push_back(p);
    ((d.beta >> p) & 1 ? occ_b : vir_b).push_back(p);
  }
  auto move_bit = [](std::uint64_t s, int h, int p) {
    return (s & ~(1ull << h)) | (1ull << p);
  };
  for (int h : occ_a)
    for (int p : vir_a) fn(Determinant{move_bit(d.alpha, h, p), d.beta});
  for (int h : occ_b)
    for (int p : vir_b) fn(Determinant{d.alpha, move_bit(d.beta, h, p)});
  if (level != ExcitationLevel::singles_doubles) return;
  for (std::size_t i = 1; i < occ_a.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      for (std::size_t a = 1; a < vir_a.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
          fn(Determinant{move_bit(move_bit(d.alpha, occ_a[i], vir_a[a]), occ_a[j], vir_a[b]),
                         d.beta});
  for (std::size_t i = 1; i < occ_b.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      for (std::size_t a = 1; a < vir_b.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
          fn(Determinant{d.alpha,
                         move_bit(move_bit(d.beta, occ_b[i], vir_b[a]), occ_b[j], vir_b[b])});
  for (int ha : occ_a)
    for (int pa : vir_a)
      for (int hb : occ_b)
        for (int pb : vir_b)
          fn(Determinant{move_bit(d.alpha, ha, pa), move_bit(d.beta, hb, pb)});
}

}  // namespace detail

/// Input set closed under singles (and mixed-spin doubles when requested);
/// sorted, deduplicated, electron counts preserved.
inline std::vector<Determinant> generate_excitations(const std::vector<Determinant>& dets,
                                                     int n_orbitals, ExcitationLevel level) {
  if (dets.empty()) return {};
  const int n_alpha = dets.front().n_alpha();
  const int n_beta = dets.front().n_beta();
  for (const auto& d : dets)
    if (d.n_alpha() != n_alpha || d.n_beta() != n_beta)
      throw ArgumentError("generate_excitations: determinants have mixed electron counts");

  std::unordered_set<Determinant, DeterminantHash> seen(dets.begin(), dets.end());
  for (const auto& d : dets)
    detail::for_each_excitation(d, n_orbitals, level,
                                [&](const Determinant& e) { seen.insert(e); });
  std::vector<Determinant> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// Epstein-Nesbet style importance for determinants the sampler never saw:
/// |<new|H|Psi>| / (E_diag(new) - E_current).
class PerturbativeScorer {
 public:
  PerturbativeScorer(const MolecularHamiltonian& ham, std::vector<Determinant> reference_dets,
                     std::vector<double> reference_coeffs, double current_energy)
      : ham_(&ham),
        dets_(std::move(reference_dets)),
        coeffs_(std::move(reference_coeffs)),
        e_current_(current_energy) {
    if (dets_.size() != coeffs_.size())
      throw ArgumentError("PerturbativeScorer: determinant/coefficient size mismatch");
  }

  double score(const Determinant& candidate) const {
    double coupling = 0.0;
    for (std::size_t i = 0; i < dets_.size(); ++i) {
      if (excitation_degree(candidate, dets_[i]) > 2) continue;
      coupling += coeffs_[i] * slater_condon_element(*ham_, candidate, dets_[i]);
    }
    double denom = slater_condon_diagonal(*ham_, candidate) - e_current_;
    if (std::abs(denom) < 1e-6) denom = denom < 0 ? -1e-6 : 1e-6;
    return std::abs(coupling / denom);
  }

 private:
  const MolecularHamiltonian* ham_;
  std::vector<Determinant> dets_;
  std::vector<double> coeffs_;
  double e_current_;
};

/// Ranks by importance and keeps the top `cap` strings per spin (product
/// mode) or determinants (explicit mode). Determinants absent from `weights`
/// are scored perturbatively when a scorer is supplied, zero otherwise.
inline SubspaceBasis rank_and_cap(
    const std::vector<Determinant>& dets,
    const std::unordered_map<Determinant, double, DeterminantHash>& weights,
    const ExtensionConfig& cfg, int n_orbitals, const PerturbativeScorer* scorer = nullptr) {
  if (cfg.cap < 1) throw ArgumentError("rank_and_cap: cap must be >= 1");

  std::vector<std::pair<Determinant, double>> scored;
  scored.reserve(dets.size());
  for (const auto& d : dets) {
    const auto it = weights.find(d);
    const double w = it != weights.end() ? it->second : (scorer ? scorer->score(d) : 0.0);
    scored.push_back({d, w});
  }

  if (cfg.mode == SubspaceBasis::Mode::explicit_list) {
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (scored.size() > cfg.cap) scored.resize(cfg.cap);
    std::vector<Determinant> kept;
    kept.reserve(scored.size());
    for (const auto& [d, w] : scored) kept.push_back(d);
    return SubspaceBasis::explicit_list(n_orbitals, std::move(kept));
  }

  // Product mode: importance of a string is its summed determinant importance.
  std::unordered_map<std::uint64_t, double> alpha_score, beta_score;
  for (const auto& [d, w] : scored) {
    alpha_score[d.alpha] += w;
    beta_score[d.beta] += w;
  }
  auto top_strings = [&](std::unordered_map<std::uint64_t, double>& score) {
    std::vector<std::pair<std::uint64_t, double>> items(score.begin(), score.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (items.size() > cfg.cap) items.resize(cfg.cap);
    std::vector<std::uint64_t> out;
    out.reserve(items.size());
    for (const auto& [s, w] : items) out.push_back(s);
    return out;
  };
  return SubspaceBasis::product(n_orbitals, top_strings(alpha_score), top_strings(beta_score));
}

}  // namespace sqdrift
