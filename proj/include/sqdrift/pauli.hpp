// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "sqdrift/errors.hpp"

namespace sqdrift {

inline constexpr int kMaxPauliQubits = 64;

/// Pauli string in the symplectic (x, z) mask representation.
/// Qubit q carries X if only x is set, Z if only z, Y if both, I if neither.
struct PauliString {
  int n_qubits = 0;
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;

  friend bool operator==(const PauliString&, const PauliString&) = default;

  bool is_identity() const noexcept { return x_mask == 0 && z_mask == 0; }

  int weight() const noexcept { return std::popcount(x_mask | z_mask); }

  /// Label with qubit 0 leftmost, e.g. "XZZY".
  std::string label() const {
    std::string s(n_qubits, 'I');
    for (int q = 0; q < n_qubits; ++q) {
      const bool x = (x_mask >> q) & 1, z = (z_mask >> q) & 1;
      s[q] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    return s;
  }

  static PauliString from_label(const std::string& label) {
    PauliString p;
    p.n_qubits = static_cast<int>(label.size());
    if (p.n_qubits > kMaxPauliQubits) throw ArgumentError("PauliString: too many qubits");
    for (int q = 0; q < p.n_qubits; ++q) {
      switch (label[q]) {
        case 'I':
          break;
        case 'X':
          p.x_mask |= 1ull << q;
          break;
        case 'Y':
          p.x_mask |= 1ull << q;
          p.z_mask |= 1ull << q;
          break;
        case 'Z':
          p.z_mask |= 1ull << q;
          break;
        default:
          throw ArgumentError(std::string("PauliString: bad label character '") + label[q] + "'");
      }
    }
    return p;
  }

  /// Action on a computational basis state: P|b> = phase(b) |b ^ x_mask>.
  std::complex<double> basis_phase(std::uint64_t b) const noexcept {
    // Hermitian string = i^{|x&z|} X^x Z^z.
    static constexpr std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    int e = std::popcount(x_mask & z_mask) % 4;
    if (std::popcount(z_mask & b) & 1) e = (e + 2) % 4;
    return kI[e];
  }
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString op;
};

/// Weighted sum of Pauli strings with real coefficients; the identity
/// component is kept apart from the sampled terms.
struct PauliHamiltonian {
  int n_qubits = 0;
  double identity_offset = 0.0;
  std::vector<PauliTerm> terms;         // merged, no identity, sorted by masks
  double dropped_weight = 0.0;          // |c| mass removed by the truncation threshold
  double truncation_threshold = 1e-12;
};

/// lambda = sum_k |c_k| over the sampled (non-identity) terms.
inline double lambda_norm(const PauliHamiltonian& h) {
  double s = 0.0;
  for (const auto& t : h.terms) s += std::abs(t.coefficient);
  return s;
}

/// p_k = |c_k| / lambda over the non-identity terms.
inline std::vector<double> sampling_distribution(const PauliHamiltonian& h) {
  const double lambda = lambda_norm(h);
  if (!(lambda > 0.0))
    throw ArgumentError("sampling_distribution: degenerate Hamiltonian (lambda = 0)");
  std::vector<double> p;
  p.reserve(h.terms.size());
  for (const auto& t : h.terms) p.push_back(std::abs(t.coefficient) / lambda);
  return p;
}

/// Term list as text, one "coefficient  label" per line; identity first.
inline void write_pauli_terms(std::ostream& out, const PauliHamiltonian& h) {
  char buf[64];
  auto emit = [&](double c, const std::string& label) {
    std::snprintf(buf, sizeof(buf), "%.17g", c);
    out << buf << "  " << label << "\n";
  };
  if (h.identity_offset != 0.0) emit(h.identity_offset, std::string(h.n_qubits, 'I'));
  for (const auto& t : h.terms) emit(t.coefficient, t.op.label());
}

namespace detail {

struct MaskPair {
  std::uint64_t x, z;
  friend auto operator<=>(const MaskPair&, const MaskPair&) = default;
};

struct MaskPairHash {
  std::size_t operator()(const MaskPair& m) const noexcept {
    std::uint64_t h = m.x * 0x9e3779b97f4a7c15ull;
    h ^= m.z + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Product phase: P(x1,z1) * P(x2,z2) = i^e * P(x1^x2, z1^z2).
inline int pauli_product_phase_exponent(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2,
                                        std::uint64_t z2) noexcept {
  const int p1 = std::popcount(x1 & z1);
  const int p2 = std::popcount(x2 & z2);
  const int p3 = std::popcount((x1 ^ x2) & (z1 ^ z2));
  const int anti = std::popcount(z1 & x2);
  return ((p1 + p2 - p3 + 2 * anti) % 4 + 4) % 4;
}

}  // namespace detail

}  // namespace sqdrift
