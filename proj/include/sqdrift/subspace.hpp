// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <algorithm>
#include <bit>
#include <cstdint>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "sqdrift/davidson.hpp"
#include "sqdrift/determinant.hpp"
#include "sqdrift/errors.hpp"
#include "sqdrift/hamiltonian.hpp"
#include "sqdrift/slater_condon.hpp"

namespace sqdrift {

/// Determinant basis, either an alpha x beta string product (the d^2
/// structure) or an explicit determinant list.
class SubspaceBasis {
 public:
  enum class Mode { product, explicit_list };

  static SubspaceBasis product(int n_orbitals, std::vector<std::uint64_t> alpha,
                               std::vector<std::uint64_t> beta) {
    SubspaceBasis b;
    b.mode_ = Mode::product;
    b.n_orbitals_ = n_orbitals;
    b.alpha_ = sorted_unique(std::move(alpha));
    b.beta_ = sorted_unique(std::move(beta));
    return b;
  }

  /// Product basis over the alpha/beta strings appearing in `dets`.
  static SubspaceBasis product_from_determinants(int n_orbitals,
                                                 const std::vector<Determinant>& dets) {
    std::vector<std::uint64_t> alpha, beta;
    alpha.reserve(dets.size());
    beta.reserve(dets.size());
    for (const auto& d : dets) {
      alpha.push_back(d.alpha);
      beta.push_back(d.beta);
    }
    return product(n_orbitals, std::move(alpha), std::move(beta));
  }

  static SubspaceBasis explicit_list(int n_orbitals, std::vector<Determinant> dets) {
    SubspaceBasis b;
    b.mode_ = Mode::explicit_list;
    b.n_orbitals_ = n_orbitals;
    std::sort(dets.begin(), dets.end());
    dets.erase(std::unique(dets.begin(), dets.end()), dets.end());
    b.dets_ = std::move(dets);
    return b;
  }

  Mode mode() const noexcept { return mode_; }
  int n_orbitals() const noexcept { return n_orbitals_; }
  const std::vector<std::uint64_t>& alpha_strings() const noexcept { return alpha_; }
  const std::vector<std::uint64_t>& beta_strings() const noexcept { return beta_; }

  std::size_t size() const noexcept {
    return mode_ == Mode::product ? alpha_.size() * beta_.size() : dets_.size();
  }

  Determinant determinant(std::size_t i) const {
    if (mode_ == Mode::explicit_list) return dets_[i];
    return {alpha_[i / beta_.size()], beta_[i % beta_.size()]};
  }

  /// Index of `d`, or npos when absent.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(const Determinant& d) const {
    if (mode_ == Mode::product) {
      const auto ia = std::lower_bound(alpha_.begin(), alpha_.end(), d.alpha);
      if (ia == alpha_.end() || *ia != d.alpha) return npos;
      const auto ib = std::lower_bound(beta_.begin(), beta_.end(), d.beta);
      if (ib == beta_.end() || *ib != d.beta) return npos;
      return static_cast<std::size_t>(ia - alpha_.begin()) * beta_.size() +
             static_cast<std::size_t>(ib - beta_.begin());
    }
    const auto it = std::lower_bound(dets_.begin(), dets_.end(), d);
    if (it == dets_.end() || *it != d) return npos;
    return static_cast<std::size_t>(it - dets_.begin());
  }

  bool contains(const Determinant& d) const { return index_of(d) != npos; }

  /// FNV-1a over the basis content; stable across runs for determinism checks.
  std::uint64_t content_hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 0x100000001b3ull;
      }
    };
    mix(mode_ == Mode::product ? 1 : 2);
    if (mode_ == Mode::product) {
      for (auto a : alpha_) mix(a);
      mix(0xffffffffffffffffull);
      for (auto b : beta_) mix(b);
    } else {
      for (const auto& d : dets_) {
        mix(d.alpha);
        mix(d.beta);
      }
    }
    return h;
  }

  friend bool operator==(const SubspaceBasis&, const SubspaceBasis&) = default;

 private:
  static std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  Mode mode_ = Mode::explicit_list;
  int n_orbitals_ = 0;
  std::vector<std::uint64_t> alpha_, beta_;
  std::vector<Determinant> dets_;
};

namespace detail {

/// Visits every determinant within excitation degree <= 2 of `d` (the
/// Hamiltonian-connected candidates), each exactly once.
template <typename Fn>
void for_each_connected(const Determinant& d, int n_orbitals, Fn&& fn) {
  std::vector<int> occ_a, vir_a, occ_b, vir_b;
  for (int p = 0; p < n_orbitals; ++p) {
    ((d.alpha >> p) & 1 ? occ_a : vir_a).push_back(p);
    ((d.beta >> p) & 1 ? occ_b : vir_b).push_back(p);
  }
  auto move_bit = [](std::uint64_t s, int h, int p) {
    return (s & ~(1ull << h)) | (1ull << p);
  };
  // singles
  for (int h : occ_a)
    for (int p : vir_a) fn(Determinant{move_bit(d.alpha, h, p), d.beta});
  for (int h : occ_b)
    for (int p : vir_b) fn(Determinant{d.alpha, move_bit(d.beta, h, p)});
  // same-spin doubles
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
  // mixed doubles
  for (int ha : occ_a)
    for (int pa : vir_a)
      for (int hb : occ_b)
        for (int pb : vir_b)
          fn(Determinant{move_bit(d.alpha, ha, pa), move_bit(d.beta, hb, pb)});
}

inline std::size_t connection_upper_bound(int n_orbitals, int n_alpha, int n_beta) {
  const std::size_t sa = static_cast<std::size_t>(n_alpha) * (n_orbitals - n_alpha);
  const std::size_t sb = static_cast<std::size_t>(n_beta) * (n_orbitals - n_beta);
  auto pairs = [](std::size_t n) { return n * (n > 0 ? n - 1 : 0) / 2; };
  const std::size_t daa = pairs(n_alpha) * pairs(n_orbitals - n_alpha);
  const std::size_t dbb = pairs(n_beta) * pairs(n_orbitals - n_beta);
  return 1 + sa + sb + daa + dbb + sa * sb;
}

}  // namespace detail

/// Projected Hamiltonian over the basis. Connected pairs come from
/// excitation generation against a basis index, not an all-pairs scan.
inline SparseMatrix build_subspace_matrix(const MolecularHamiltonian& ham,
                                          const SubspaceBasis& basis,
                                          std::size_t max_nonzeros = 100'000'000) {
  const std::size_t dim = basis.size();
  if (dim == 0) throw ArgumentError("build_subspace_matrix: empty basis");

  const Determinant d0 = basis.determinant(0);
  const std::size_t est =
      dim * std::min(dim, detail::connection_upper_bound(basis.n_orbitals(), d0.n_alpha(),
                                                         d0.n_beta()));
  if (est > max_nonzeros)
    throw ScaleError("build_subspace_matrix: estimated nonzero count " + std::to_string(est) +
                     " exceeds the memory cap " + std::to_string(max_nonzeros));

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t i = 0; i < dim; ++i) {
    const Determinant di = basis.determinant(i);
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i),
                          slater_condon_diagonal(ham, di));
    detail::for_each_connected(di, basis.n_orbitals(), [&](const Determinant& dj) {
      const std::size_t j = basis.index_of(dj);
      if (j == SubspaceBasis::npos || j <= i) return;
      const double v = slater_condon_element(ham, di, dj);
      if (v != 0.0) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
        triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
      }
    });
  }
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

struct SubspaceResult {
  std::vector<double> energies;     // ascending
  Eigen::MatrixXd eigenvectors;     // dim x k
  SubspaceBasis basis;
  std::vector<double> residual_norms;

  double ground_energy() const { return energies.at(0); }
};

inline SubspaceResult solve_subspace(const MolecularHamiltonian& ham, const SubspaceBasis& basis,
                                     int k = 1, double tol = 1e-8,
                                     std::size_t max_nonzeros = 100'000'000) {
  const auto matrix = build_subspace_matrix(ham, basis, max_nonzeros);
  auto sol = diagonalize(matrix, k, tol);
  SubspaceResult res;
  res.energies = std::move(sol.eigenvalues);
  res.eigenvectors = std::move(sol.eigenvectors);
  res.basis = basis;
  res.residual_norms = std::move(sol.residual_norms);
  return res;
}

namespace detail {

inline void check_normalized(const Eigen::VectorXd& coeffs, const char* who) {
  if (std::abs(coeffs.norm() - 1.0) > 1e-6)
    throw ArgumentError(std::string(who) + ": coefficients are not normalized");
}

/// Phase of a_P acting on a determinant, P a spin orbital in blocked order.
inline double annihilation_sign(const Determinant& d, int orbital, int spin) noexcept {
  const std::uint64_t below = orbital == 0 ? 0ull : ((1ull << orbital) - 1);
  int count = spin == 0 ? std::popcount(d.alpha & below)
                        : d.n_alpha() + std::popcount(d.beta & below);
  return (count & 1) ? -1.0 : 1.0;
}

}  // namespace detail

/// Spin-resolved one-particle reduced density matrices (alpha, beta).
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> one_rdm(const SubspaceBasis& basis,
                                                           const Eigen::VectorXd& coeffs) {
  detail::check_normalized(coeffs, "one_rdm");
  const int n = basis.n_orbitals();
  Eigen::MatrixXd gamma_a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd gamma_b = Eigen::MatrixXd::Zero(n, n);
  const std::size_t dim = basis.size();
  for (std::size_t j = 0; j < dim; ++j) {
    const double cj = coeffs(static_cast<Eigen::Index>(j));
    if (cj == 0.0) continue;
    const Determinant dj = basis.determinant(j);
    for (int spin = 0; spin < 2; ++spin) {
      const std::uint64_t s = spin == 0 ? dj.alpha : dj.beta;
      Eigen::MatrixXd& gamma = spin == 0 ? gamma_a : gamma_b;
      for (int q = 0; q < n; ++q) {
        if (!((s >> q) & 1)) continue;
        gamma(q, q) += cj * cj;
        for (int p = 0; p < n; ++p) {
          if (p == q || ((s >> p) & 1)) continue;
          const std::uint64_t moved = (s & ~(1ull << q)) | (1ull << p);
          const Determinant target = spin == 0 ? Determinant{moved, dj.beta}
                                               : Determinant{dj.alpha, moved};
          const std::size_t i = basis.index_of(target);
          if (i == SubspaceBasis::npos) continue;
          gamma(p, q) += coeffs(static_cast<Eigen::Index>(i)) * cj *
                         detail::excitation_sign(s, q, p);
        }
      }
    }
  }
  return {gamma_a, gamma_b};
}

struct DysonOrbital {
  Eigen::VectorXd coefficients;  // over spatial orbitals, removed spin sector
  double norm = 0.0;
  int removed_spin = 0;  // 0 = alpha, 1 = beta
};

/// phi_p = <Psi(N-1)| a_p |Psi(N)> using each result's lowest eigenvector.
inline DysonOrbital dyson_orbital(const SubspaceResult& result_n,
                                  const SubspaceResult& result_n_minus_1) {
  const auto& bn = result_n.basis;
  const auto& bm = result_n_minus_1.basis;
  if (bn.size() == 0 || bm.size() == 0) throw ArgumentError("dyson_orbital: empty basis");
  if (bn.n_orbitals() != bm.n_orbitals())
    throw ArgumentError("dyson_orbital: orbital sets differ");
  const Determinant ref_n = bn.determinant(0);
  const Determinant ref_m = bm.determinant(0);
  int removed_spin;
  if (ref_n.n_alpha() == ref_m.n_alpha() + 1 && ref_n.n_beta() == ref_m.n_beta())
    removed_spin = 0;
  else if (ref_n.n_beta() == ref_m.n_beta() + 1 && ref_n.n_alpha() == ref_m.n_alpha())
    removed_spin = 1;
  else
    throw ArgumentError("dyson_orbital: states do not differ by one electron in one spin sector");

  const int n = bn.n_orbitals();
  DysonOrbital out;
  out.removed_spin = removed_spin;
  out.coefficients = Eigen::VectorXd::Zero(n);
  for (std::size_t j = 0; j < bn.size(); ++j) {
    const double cj = result_n.eigenvectors(static_cast<Eigen::Index>(j), 0);
    if (cj == 0.0) continue;
    const Determinant dj = bn.determinant(j);
    const std::uint64_t s = removed_spin == 0 ? dj.alpha : dj.beta;
    for (int p = 0; p < n; ++p) {
      if (!((s >> p) & 1)) continue;
      const std::uint64_t removed = s & ~(1ull << p);
      const Determinant target = removed_spin == 0 ? Determinant{removed, dj.beta}
                                                   : Determinant{dj.alpha, removed};
      const std::size_t i = bm.index_of(target);
      if (i == SubspaceBasis::npos) continue;
      out.coefficients(p) += result_n_minus_1.eigenvectors(static_cast<Eigen::Index>(i), 0) * cj *
                             detail::annihilation_sign(dj, p, removed_spin);
    }
  }
  out.norm = out.coefficients.norm();
  return out;
}

inline constexpr std::size_t kFciDeterminantCap = 1'000'000;

/// Brute-force full-sector diagonalization; ground truth for small systems.
inline SubspaceResult fci_oracle(const MolecularHamiltonian& ham, int n_alpha, int n_beta,
                                 int k = 1, double tol = 1e-10) {
  const auto alpha = enumerate_strings(ham.n_orbitals(), n_alpha);
  const auto beta = enumerate_strings(ham.n_orbitals(), n_beta);
  if (alpha.size() * beta.size() > kFciDeterminantCap)
    throw ScaleError("fci_oracle: sector dimension " +
                     std::to_string(alpha.size() * beta.size()) + " exceeds the cap " +
                     std::to_string(kFciDeterminantCap));
  const auto basis = SubspaceBasis::product(ham.n_orbitals(), alpha, beta);
  return solve_subspace(ham, basis, k, tol);
}

inline SubspaceResult fci_oracle(const MolecularHamiltonian& ham, int k = 1, double tol = 1e-10) {
  return fci_oracle(ham, ham.n_alpha(), ham.n_beta(), k, tol);
}

/// Newline-separated basis bitstrings (beta block then alpha block).
inline void write_basis(std::ostream& out, const SubspaceBasis& basis) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    out << determinant_bits(basis.determinant(i), basis.n_orbitals()) << "\n";
}

/// (bitstring, coefficient) CSV for one eigenvector.
inline void write_eigenvector_csv(std::ostream& out, const SubspaceBasis& basis,
                                  const Eigen::VectorXd& coeffs) {
  char buf[64];
  out << "bitstring,coefficient\n";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", coeffs(static_cast<Eigen::Index>(i)));
    out << determinant_bits(basis.determinant(i), basis.n_orbitals()) << "," << buf << "\n";
  }
}

}  // namespace sqdrift
