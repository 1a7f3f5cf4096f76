// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sqdrift/hamiltonian.hpp"
#include "sqdrift/pauli.hpp"

namespace sqdrift {

/// Spin-orbital to qubit layout. Blocked (all alpha, then all beta) keeps the
/// determinant split a plain bit-slice and is the pipeline default.
enum class SpinOrbitalOrdering { blocked, interleaved };

inline int spin_orbital_qubit(SpinOrbitalOrdering ordering, int orbital, int spin,
                              int n_orbitals) noexcept {
  return ordering == SpinOrbitalOrdering::blocked ? orbital + spin * n_orbitals
                                                  : 2 * orbital + spin;
}

namespace detail {

/// Sparse accumulator for complex-weighted Pauli strings.
class PauliAccumulator {
 public:
  using Map = std::unordered_map<MaskPair, std::complex<double>, MaskPairHash>;

  static PauliAccumulator zero() { return PauliAccumulator{}; }

  static PauliAccumulator identity(std::complex<double> c) {
    PauliAccumulator a;
    a.map_[{0, 0}] = c;
    return a;
  }

  /// Ladder operator: a_q (dagger=false) or a+_q (dagger=true), with the
  /// Z-parity tail on qubits below q.
  static PauliAccumulator ladder(int qubit, bool dagger) {
    const std::uint64_t tail = qubit == 0 ? 0ull : ((1ull << qubit) - 1);
    const std::uint64_t bit = 1ull << qubit;
    PauliAccumulator a;
    a.map_[{bit, tail}] = {0.5, 0.0};                      // Z..Z X
    a.map_[{bit, tail | bit}] = {0.0, dagger ? -0.5 : 0.5};  // Z..Z Y
    return a;
  }

  PauliAccumulator multiply(const PauliAccumulator& rhs) const {
    PauliAccumulator out;
    static constexpr std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& [pa, ca] : map_)
      for (const auto& [pb, cb] : rhs.map_) {
        const int e = pauli_product_phase_exponent(pa.x, pa.z, pb.x, pb.z);
        out.map_[{pa.x ^ pb.x, pa.z ^ pb.z}] += ca * cb * kI[e];
      }
    return out;
  }

  void add_scaled(const PauliAccumulator& rhs, double w) {
    for (const auto& [p, c] : rhs.map_) map_[p] += w * c;
  }

  const Map& map() const noexcept { return map_; }

 private:
  Map map_;
};

}  // namespace detail

/// Maps the second-quantized Hamiltonian to qubits via Jordan-Wigner.
///
/// Terms below `threshold` are discarded and their total |c| is reported in
/// dropped_weight so the truncation's effect on lambda stays auditable.
inline PauliHamiltonian jordan_wigner(const MolecularHamiltonian& ham,
                                      SpinOrbitalOrdering ordering = SpinOrbitalOrdering::blocked,
                                      double threshold = 1e-12) {
  using detail::PauliAccumulator;
  const int n = ham.n_orbitals();
  const int n_qubits = 2 * n;
  if (n_qubits > kMaxPauliQubits)
    throw ScaleError("jordan_wigner: qubit count exceeds the 64-qubit mask representation");

  // Cache ladder operators per (qubit, dagger).
  std::vector<PauliAccumulator> create(n_qubits, PauliAccumulator::zero());
  std::vector<PauliAccumulator> destroy(n_qubits, PauliAccumulator::zero());
  for (int q = 0; q < n_qubits; ++q) {
    create[q] = PauliAccumulator::ladder(q, true);
    destroy[q] = PauliAccumulator::ladder(q, false);
  }

  PauliAccumulator acc = PauliAccumulator::identity(ham.core_energy());

  for (int spin = 0; spin < 2; ++spin)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const double h = ham.h1(p, q);
        if (h == 0.0) continue;
        const int qp = spin_orbital_qubit(ordering, p, spin, n);
        const int qq = spin_orbital_qubit(ordering, q, spin, n);
        acc.add_scaled(create[qp].multiply(destroy[qq]), h);
      }

  // 1/2 sum_{st,pqrs} (pq|rs) a+_{ps} a+_{rt} a_{st} a_{qs}
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s) {
              const double v = ham.eri(p, q, r, s);
              if (v == 0.0) continue;
              const int qp = spin_orbital_qubit(ordering, p, s1, n);
              const int qq = spin_orbital_qubit(ordering, q, s1, n);
              const int qr = spin_orbital_qubit(ordering, r, s2, n);
              const int qs = spin_orbital_qubit(ordering, s, s2, n);
              if (qp == qr || qq == qs) continue;  // a+a+ / aa on the same mode vanish
              auto term = create[qp].multiply(create[qr]).multiply(destroy[qs]).multiply(
                  destroy[qq]);
              acc.add_scaled(term, 0.5 * v);
            }

  PauliHamiltonian out;
  out.n_qubits = n_qubits;
  out.truncation_threshold = threshold;
  for (const auto& [masks, c] : acc.map()) {
    if (std::abs(c.imag()) > 1e-10)
      throw DataError("jordan_wigner: non-real Pauli coefficient (|imag| = " +
                      std::to_string(std::abs(c.imag())) + ")");
    const double re = c.real();
    if (masks.x == 0 && masks.z == 0) {
      out.identity_offset += re;
      continue;
    }
    if (std::abs(re) < threshold) {
      out.dropped_weight += std::abs(re);
      continue;
    }
    out.terms.push_back({re, PauliString{n_qubits, masks.x, masks.z}});
  }
  std::sort(out.terms.begin(), out.terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
    return std::pair(a.op.x_mask, a.op.z_mask) < std::pair(b.op.x_mask, b.op.z_mask);
  });
  return out;
}

}  // namespace sqdrift
