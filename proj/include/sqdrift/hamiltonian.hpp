// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sqdrift/determinant.hpp"
#include "sqdrift/errors.hpp"

namespace sqdrift {

/// Second-quantized electronic Hamiltonian over spatial orbitals.
///
/// one_body is a symmetric n x n matrix; two_body holds (pq|rs) in chemists'
/// notation with the full 8-fold real-orbital symmetry populated, so lookups
/// never need canonicalization.
class MolecularHamiltonian {
 public:
  MolecularHamiltonian() = default;

  MolecularHamiltonian(int n_orbitals, int n_electrons, int spin_projection)
      : n_orbitals_(n_orbitals),
        n_electrons_(n_electrons),
        spin_projection_(spin_projection),
        one_body_(static_cast<std::size_t>(n_orbitals) * n_orbitals, 0.0),
        two_body_(static_cast<std::size_t>(n_orbitals) * n_orbitals * n_orbitals * n_orbitals,
                  0.0) {
    if (n_orbitals < 0 || n_orbitals > kMaxOrbitals)
      throw ArgumentError("MolecularHamiltonian: orbital count out of range [0, 64]");
    if (n_electrons < 0 || n_electrons > 2 * n_orbitals)
      throw ArgumentError("MolecularHamiltonian: electron count out of range");
    if (std::abs(spin_projection) > n_electrons ||
        ((spin_projection % 2 + 2) % 2) != (n_electrons % 2))
      throw ArgumentError("MolecularHamiltonian: spin projection incompatible with electron count");
  }

  int n_orbitals() const noexcept { return n_orbitals_; }
  int n_electrons() const noexcept { return n_electrons_; }
  int spin_projection() const noexcept { return spin_projection_; }
  int n_alpha() const noexcept { return (n_electrons_ + spin_projection_) / 2; }
  int n_beta() const noexcept { return (n_electrons_ - spin_projection_) / 2; }

  double core_energy() const noexcept { return core_energy_; }
  void set_core_energy(double e) noexcept { core_energy_ = e; }

  double h1(int p, int q) const noexcept { return one_body_[idx2(p, q)]; }
  void set_h1(int p, int q, double v) noexcept {
    one_body_[idx2(p, q)] = v;
    one_body_[idx2(q, p)] = v;
  }

  /// Chemists' notation (pq|rs).
  double eri(int p, int q, int r, int s) const noexcept { return two_body_[idx4(p, q, r, s)]; }

  /// Stores all 8 symmetry-equivalent slots of (pq|rs).
  void set_eri(int p, int q, int r, int s, double v) noexcept {
    two_body_[idx4(p, q, r, s)] = v;
    two_body_[idx4(q, p, r, s)] = v;
    two_body_[idx4(p, q, s, r)] = v;
    two_body_[idx4(q, p, s, r)] = v;
    two_body_[idx4(r, s, p, q)] = v;
    two_body_[idx4(s, r, p, q)] = v;
    two_body_[idx4(r, s, q, p)] = v;
    two_body_[idx4(s, r, q, p)] = v;
  }

  const std::vector<int>& orbital_symmetries() const noexcept { return orbital_symmetries_; }
  void set_orbital_symmetries(std::vector<int> syms) { orbital_symmetries_ = std::move(syms); }

  /// Checks the stored-data invariants; throws DataError on violation.
  void validate() const {
    const int n = n_orbitals_;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q <= p; ++q)
        if (std::abs(h1(p, q) - h1(q, p)) > 1e-12)
          throw DataError("one-body integrals not symmetric");
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) {
            const double v = eri(p, q, r, s);
            if (std::abs(v - eri(q, p, r, s)) > 1e-12 || std::abs(v - eri(p, q, s, r)) > 1e-12 ||
                std::abs(v - eri(r, s, p, q)) > 1e-12)
              throw DataError("two-body integrals violate 8-fold symmetry");
          }
  }

  friend bool operator==(const MolecularHamiltonian& a, const MolecularHamiltonian& b) {
    return a.n_orbitals_ == b.n_orbitals_ && a.n_electrons_ == b.n_electrons_ &&
           a.spin_projection_ == b.spin_projection_ && a.core_energy_ == b.core_energy_ &&
           a.one_body_ == b.one_body_ && a.two_body_ == b.two_body_;
  }

 private:
  std::size_t idx2(int p, int q) const noexcept {
    return static_cast<std::size_t>(p) * n_orbitals_ + q;
  }
  std::size_t idx4(int p, int q, int r, int s) const noexcept {
    return ((static_cast<std::size_t>(p) * n_orbitals_ + q) * n_orbitals_ + r) * n_orbitals_ + s;
  }

  int n_orbitals_ = 0;
  int n_electrons_ = 0;
  int spin_projection_ = 0;
  double core_energy_ = 0.0;
  std::vector<double> one_body_;
  std::vector<double> two_body_;
  std::vector<int> orbital_symmetries_;
};

/// Slater-Condon diagonal <d|H|d>, core energy included.
inline double slater_condon_diagonal(const MolecularHamiltonian& ham, const Determinant& det) {
  double e = ham.core_energy();
  std::vector<int> occ_a, occ_b;
  for (int p = 0; p < ham.n_orbitals(); ++p) {
    if ((det.alpha >> p) & 1) occ_a.push_back(p);
    if ((det.beta >> p) & 1) occ_b.push_back(p);
  }
  for (int p : occ_a) e += ham.h1(p, p);
  for (int p : occ_b) e += ham.h1(p, p);
  auto same_spin = [&](const std::vector<int>& occ) {
    double s = 0.0;
    for (std::size_t i = 1; i < occ.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        s += ham.eri(occ[i], occ[i], occ[j], occ[j]) - ham.eri(occ[i], occ[j], occ[j], occ[i]);
    return s;
  };
  e += same_spin(occ_a) + same_spin(occ_b);
  for (int p : occ_a)
    for (int q : occ_b) e += ham.eri(p, p, q, q);
  return e;
}

/// Energy of a single reference determinant (the Fig. 3 E_HF baseline).
inline double hf_energy(const MolecularHamiltonian& ham, const Determinant& reference) {
  if (reference.n_alpha() != ham.n_alpha() || reference.n_beta() != ham.n_beta())
    throw ArgumentError("hf_energy: reference determinant has wrong electron counts");
  return slater_condon_diagonal(ham, reference);
}

/// Effective Hamiltonian over `active` orbitals with `frozen` doubly occupied.
/// Orbitals in neither list are discarded as empty.
inline MolecularHamiltonian restrict_active_space(const MolecularHamiltonian& ham,
                                                  const std::vector<int>& frozen,
                                                  const std::vector<int>& active) {
  for (int f : frozen)
    if (std::find(active.begin(), active.end(), f) != active.end())
      throw ArgumentError("restrict_active_space: frozen and active sets overlap");
  auto in_range = [&](int p) { return p >= 0 && p < ham.n_orbitals(); };
  for (int p : frozen)
    if (!in_range(p)) throw ArgumentError("restrict_active_space: frozen index out of range");
  for (int p : active)
    if (!in_range(p)) throw ArgumentError("restrict_active_space: active index out of range");

  const int n_frozen = static_cast<int>(frozen.size());
  const int n_active = static_cast<int>(active.size());
  const int n_elec = ham.n_electrons() - 2 * n_frozen;
  if (n_elec < 0)
    throw ArgumentError("restrict_active_space: freezing removes more electrons than present");

  MolecularHamiltonian out(n_active, n_elec, ham.spin_projection());

  double core = ham.core_energy();
  for (int i : frozen) core += 2.0 * ham.h1(i, i);
  for (int i : frozen)
    for (int j : frozen) core += 2.0 * ham.eri(i, i, j, j) - ham.eri(i, j, j, i);
  out.set_core_energy(core);

  for (int p = 0; p < n_active; ++p)
    for (int q = 0; q <= p; ++q) {
      double h = ham.h1(active[p], active[q]);
      for (int i : frozen)
        h += 2.0 * ham.eri(active[p], active[q], i, i) - ham.eri(active[p], i, i, active[q]);
      out.set_h1(p, q, h);
    }

  for (int p = 0; p < n_active; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r) {
        const int s_max = (r == p) ? q : r;
        for (int s = 0; s <= s_max; ++s)
          out.set_eri(p, q, r, s, ham.eri(active[p], active[q], active[r], active[s]));
      }

  if (!ham.orbital_symmetries().empty()) {
    std::vector<int> syms;
    for (int p : active) syms.push_back(ham.orbital_symmetries()[p]);
    out.set_orbital_symmetries(std::move(syms));
  }
  return out;
}

}  // namespace sqdrift
