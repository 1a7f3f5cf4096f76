// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <bit>
#include <cstdint>

#include "sqdrift/determinant.hpp"
#include "sqdrift/errors.hpp"
#include "sqdrift/hamiltonian.hpp"

namespace sqdrift {

namespace detail {

/// Phase of the single excitation h -> p on one spin string: parity of the
/// occupied orbitals strictly between the two indices.
inline double excitation_sign(std::uint64_t string, int hole, int particle) noexcept {
  const int lo = hole < particle ? hole : particle;
  const int hi = hole < particle ? particle : hole;
  const std::uint64_t between =
      (hi - lo < 2) ? 0ull : ((~0ull >> (64 - (hi - lo - 1))) << (lo + 1));
  return (std::popcount(string & between) & 1) ? -1.0 : 1.0;
}

inline void extract_diff(std::uint64_t bra, std::uint64_t ket, std::array<int, 2>& holes,
                         std::array<int, 2>& parts, int& degree) noexcept {
  std::uint64_t h = ket & ~bra;  // occupied in ket only
  std::uint64_t p = bra & ~ket;  // occupied in bra only
  degree = std::popcount(h);
  for (int i = 0; i < degree && i < 2; ++i) {
    holes[i] = std::countr_zero(h);
    parts[i] = std::countr_zero(p);
    h &= h - 1;
    p &= p - 1;
  }
}

}  // namespace detail

/// <d1|H|d2> by the Slater-Condon rules, zero beyond two excitations.
/// Spin-orbital order is alpha ascending then beta ascending; signs follow
/// from sequential hole->particle application in that convention.
inline double slater_condon_element(const MolecularHamiltonian& ham, const Determinant& d1,
                                    const Determinant& d2) {
  if (d1.n_alpha() != d2.n_alpha() || d1.n_beta() != d2.n_beta())
    throw ArgumentError("slater_condon_element: electron-count mismatch");

  std::array<int, 2> ha{}, pa{}, hb{}, pb{};
  int deg_a = 0, deg_b = 0;
  detail::extract_diff(d1.alpha, d2.alpha, ha, pa, deg_a);
  detail::extract_diff(d1.beta, d2.beta, hb, pb, deg_b);
  const int degree = deg_a + deg_b;
  if (degree > 2) return 0.0;
  if (degree == 0) return slater_condon_diagonal(ham, d2);

  const int n = ham.n_orbitals();
  auto occupied = [n](std::uint64_t s, auto&& fn) {
    std::uint64_t m = s;
    while (m) {
      fn(std::countr_zero(m));
      m &= m - 1;
    }
  };

  if (degree == 1) {
    // Hole h and particle p share a spin channel.
    const bool is_alpha = deg_a == 1;
    const int h = is_alpha ? ha[0] : hb[0];
    const int p = is_alpha ? pa[0] : pb[0];
    const std::uint64_t same = is_alpha ? d2.alpha : d2.beta;
    const std::uint64_t other = is_alpha ? d2.beta : d2.alpha;
    double v = ham.h1(p, h);
    occupied(same, [&](int q) {
      if (q != h) v += ham.eri(p, h, q, q) - ham.eri(p, q, q, h);
    });
    occupied(other, [&](int q) { v += ham.eri(p, h, q, q); });
    return detail::excitation_sign(same, h, p) * v;
  }

  // degree == 2
  if (deg_a == 1 && deg_b == 1) {
    const double sign = detail::excitation_sign(d2.alpha, ha[0], pa[0]) *
                        detail::excitation_sign(d2.beta, hb[0], pb[0]);
    return sign * ham.eri(pa[0], ha[0], pb[0], hb[0]);
  }
  const bool is_alpha = deg_a == 2;
  const auto& h = is_alpha ? ha : hb;
  const auto& p = is_alpha ? pa : pb;
  const std::uint64_t s = is_alpha ? d2.alpha : d2.beta;
  // Sequential application: (h0 -> p0) first, then (h1 -> p1) on the result.
  const std::uint64_t s1 = (s & ~(1ull << h[0])) | (1ull << p[0]);
  const double sign = detail::excitation_sign(s, h[0], p[0]) *
                      detail::excitation_sign(s1, h[1], p[1]);
  return sign * (ham.eri(p[0], h[0], p[1], h[1]) - ham.eri(p[0], h[1], p[1], h[0]));
}

/// Total excitation degree between two determinants.
inline int excitation_degree(const Determinant& d1, const Determinant& d2) noexcept {
  return (std::popcount(d1.alpha ^ d2.alpha) + std::popcount(d1.beta ^ d2.beta)) / 2;
}

}  // namespace sqdrift
