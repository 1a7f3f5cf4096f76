// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sqdrift/errors.hpp"

namespace sqdrift {

inline constexpr int kMaxOrbitals = 64;

/// Occupation bitstring split into per-spin strings over spatial orbitals.
/// Bit p of a string is orbital p; at most 64 spatial orbitals.
struct Determinant {
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;

  friend auto operator<=>(const Determinant&, const Determinant&) = default;

  int n_alpha() const noexcept { return std::popcount(alpha); }
  int n_beta() const noexcept { return std::popcount(beta); }
  int n_electrons() const noexcept { return n_alpha() + n_beta(); }
};

struct DeterminantHash {
  std::size_t operator()(const Determinant& d) const noexcept {
    std::uint64_t h = d.alpha * 0x9e3779b97f4a7c15ull;
    h ^= d.beta + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Aufbau reference: the lowest n_alpha / n_beta orbitals occupied.
inline Determinant hartree_fock_determinant(int n_orbitals, int n_alpha, int n_beta) {
  if (n_alpha > n_orbitals || n_beta > n_orbitals || n_alpha < 0 || n_beta < 0)
    throw ArgumentError("hartree_fock_determinant: electron count out of range");
  auto fill = [](int k) { return k == 0 ? 0ull : (~0ull >> (64 - k)); };
  return {fill(n_alpha), fill(n_beta)};
}

/// All C(n_orbitals, n_electrons) occupation strings, ascending as integers.
inline std::vector<std::uint64_t> enumerate_strings(int n_orbitals, int n_electrons) {
  if (n_electrons < 0 || n_electrons > n_orbitals)
    throw ArgumentError("enumerate_strings: invalid electron count");
  std::vector<std::uint64_t> out;
  if (n_electrons == 0) {
    out.push_back(0);
    return out;
  }
  std::uint64_t s = (~0ull >> (64 - n_electrons));
  const std::uint64_t limit = n_orbitals == 64 ? ~0ull : (1ull << n_orbitals);
  while (n_orbitals == 64 || s < limit) {
    out.push_back(s);
    // Gosper's hack: next string with the same popcount.
    std::uint64_t c = s & (~s + 1);
    std::uint64_t r = s + c;
    if (r == 0) break;
    s = (((r ^ s) >> 2) / c) | r;
    if (n_orbitals == 64 && std::popcount(s) != n_electrons) break;
  }
  return out;
}

/// Text form, most significant orbital first ("0011" = orbitals 0,1 occupied).
inline std::string string_bits(std::uint64_t s, int n_orbitals) {
  std::string out(n_orbitals, '0');
  for (int p = 0; p < n_orbitals; ++p)
    if ((s >> p) & 1) out[n_orbitals - 1 - p] = '1';
  return out;
}

/// Full 2n-bit blocked form: beta block (high) then alpha block (low).
inline std::string determinant_bits(const Determinant& d, int n_orbitals) {
  return string_bits(d.beta, n_orbitals) + string_bits(d.alpha, n_orbitals);
}

}  // namespace sqdrift
