// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "sqdrift/determinant.hpp"
#include "sqdrift/errors.hpp"
#include "sqdrift/pauli.hpp"
#include "sqdrift/rng.hpp"

namespace sqdrift {

/// Hard scale caps: beyond these the classical simulation frontier is
/// crossed on purpose, so fail loudly instead of thrashing.
inline constexpr int kMaxStatevectorQubits = 24;
inline constexpr int kMaxDenseQubits = 12;

struct StateVector {
  int n_qubits = 0;
  std::vector<std::complex<double>> amplitudes;

  static StateVector zero_state(int n_qubits) {
    if (n_qubits < 0 || n_qubits > kMaxStatevectorQubits)
      throw ScaleError("StateVector: qubit count exceeds the statevector cap (24)");
    StateVector s;
    s.n_qubits = n_qubits;
    s.amplitudes.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
    s.amplitudes[0] = 1.0;
    return s;
  }

  std::size_t dim() const noexcept { return amplitudes.size(); }

  double norm() const noexcept {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }
};

struct SampleProvenance {
  int time_index = 0;
  int realization = 0;
  std::uint64_t seed = 0;
};

/// Computational-basis measurement record. Keys are basis indices (bit q of
/// the key = qubit q, least significant first).
struct SampleSet {
  int n_qubits = 0;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total_shots = 0;
  SampleProvenance provenance;
};

/// |det> as a basis state under the blocked layout (alpha low, beta high).
/// Bit value 1 = occupied spin orbital.
inline StateVector prepare_determinant(const Determinant& det, int n_qubits) {
  if (n_qubits % 2 != 0)
    throw ArgumentError("prepare_determinant: qubit count must be 2 * n_orbitals");
  const int n_orb = n_qubits / 2;
  const std::uint64_t occupied = det.alpha | (det.beta << n_orb);
  if (n_orb < kMaxOrbitals && (det.alpha >> n_orb || det.beta >> n_orb))
    throw ArgumentError("prepare_determinant: determinant does not fit the qubit register");
  StateVector s = StateVector::zero_state(n_qubits);
  s.amplitudes[0] = 0.0;
  s.amplitudes[occupied] = 1.0;
  return s;
}

/// In-place exp(-i theta P): state <- cos(theta) state - i sin(theta) P state.
inline void apply_pauli_rotation(StateVector& state, const PauliString& p, double theta) {
  if (p.n_qubits != state.n_qubits)
    throw ArgumentError("apply_pauli_rotation: qubit count mismatch");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const std::uint64_t x = p.x_mask, z = p.z_mask;
  auto& amp = state.amplitudes;
  const std::size_t dim = amp.size();

  if (x == 0) {
    const std::complex<double> phase_plus(c, -s), phase_minus(c, s);
    for (std::size_t b = 0; b < dim; ++b)
      amp[b] *= (std::popcount(z & b) & 1) ? phase_minus : phase_plus;
    return;
  }

  // -i sin(theta) * i^{|x&z|} folded into one complex factor.
  static constexpr std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> ms = std::complex<double>(0.0, -s) * kI[std::popcount(x & z) % 4];
  const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(x));
  for (std::size_t b = 0; b < dim; ++b) {
    if (b & pivot) continue;
    const std::size_t partner = b ^ x;
    const double sign_b = (std::popcount(z & b) & 1) ? -1.0 : 1.0;
    const double sign_p = (std::popcount(z & partner) & 1) ? -1.0 : 1.0;
    const auto ab = amp[b], ap = amp[partner];
    amp[b] = c * ab + ms * sign_p * ap;
    amp[partner] = c * ap + ms * sign_b * ab;
  }
}

/// out += coeff * P |in>.
inline void add_pauli_apply(const PauliString& p, double coeff,
                            const std::vector<std::complex<double>>& in,
                            std::vector<std::complex<double>>& out) {
  static constexpr std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> base = coeff * kI[std::popcount(p.x_mask & p.z_mask) % 4];
  const std::uint64_t x = p.x_mask, z = p.z_mask;
  for (std::size_t b = 0; b < in.size(); ++b) {
    const double sign = (std::popcount(z & b) & 1) ? -1.0 : 1.0;
    out[b ^ x] += base * sign * in[b];
  }
}

/// H|in> including the identity offset.
inline std::vector<std::complex<double>> apply_hamiltonian(
    const PauliHamiltonian& h, const std::vector<std::complex<double>>& in) {
  std::vector<std::complex<double>> out(in.size(), {0.0, 0.0});
  if (h.identity_offset != 0.0)
    for (std::size_t b = 0; b < in.size(); ++b) out[b] = h.identity_offset * in[b];
  for (const auto& t : h.terms) add_pauli_apply(t.op, t.coefficient, in, out);
  return out;
}

/// Born-rule sampling, reproducible for a given rng stream. Uses a Walker
/// alias table when shots exceed the support size, inverse-CDF otherwise.
inline SampleSet sample_bitstrings(const StateVector& state, std::uint64_t shots, Rng rng) {
  if (shots < 1) throw ArgumentError("sample_bitstrings: shots must be >= 1");
  std::vector<std::uint64_t> support;
  std::vector<double> prob;
  for (std::size_t b = 0; b < state.dim(); ++b) {
    const double p = std::norm(state.amplitudes[b]);
    if (p > 0.0) {
      support.push_back(b);
      prob.push_back(p);
    }
  }
  SampleSet out;
  out.n_qubits = state.n_qubits;
  out.total_shots = shots;
  out.provenance.seed = rng.key();
  const std::size_t nnz = support.size();
  if (nnz == 0) throw ArgumentError("sample_bitstrings: zero state");

  if (shots > nnz) {
    // Vose alias construction, processed in ascending index order.
    const double total = [&] {
      double s = 0.0;
      for (double p : prob) s += p;
      return s;
    }();
    std::vector<double> scaled(nnz);
    for (std::size_t i = 0; i < nnz; ++i) scaled[i] = prob[i] * nnz / total;
    std::vector<std::size_t> small, large, alias(nnz, 0);
    std::vector<double> cut(nnz, 1.0);
    for (std::size_t i = nnz; i-- > 0;) (scaled[i] < 1.0 ? small : large).push_back(i);
    while (!small.empty() && !large.empty()) {
      const std::size_t s_i = small.back();
      const std::size_t l_i = large.back();
      small.pop_back();
      cut[s_i] = scaled[s_i];
      alias[s_i] = l_i;
      scaled[l_i] -= 1.0 - scaled[s_i];
      if (scaled[l_i] < 1.0) {
        large.pop_back();
        small.push_back(l_i);
      }
    }
    for (std::uint64_t k = 0; k < shots; ++k) {
      const std::size_t i = static_cast<std::size_t>(rng.next_below(nnz));
      const std::size_t pick = rng.next_double() < cut[i] ? i : alias[i];
      ++out.counts[support[pick]];
    }
  } else {
    std::vector<double> cdf(nnz);
    double acc = 0.0;
    for (std::size_t i = 0; i < nnz; ++i) cdf[i] = (acc += prob[i]);
    for (std::uint64_t k = 0; k < shots; ++k) ++out.counts[support[rng.sample_cdf(cdf)]];
  }
  return out;
}

}  // namespace sqdrift
