// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "sqdrift/errors.hpp"
#include "sqdrift/pauli.hpp"
#include "sqdrift/statevector.hpp"

namespace sqdrift {

namespace detail {

/// One adaptive Lanczos substep of exp(-i H tau)|v| with tridiagonal
/// exponentiation in the Krylov basis. Returns the a-posteriori error
/// estimate |beta_m * last Krylov coefficient|.
inline double lanczos_exp_step(const PauliHamiltonian& h,
                               std::vector<std::complex<double>>& psi, double tau,
                               int max_krylov) {
  using Vec = std::vector<std::complex<double>>;
  const std::size_t dim = psi.size();
  const int m_cap = static_cast<int>(std::min<std::size_t>(max_krylov, dim));

  std::vector<Vec> basis;
  std::vector<double> alpha, beta;
  basis.push_back(psi);

  auto dot = [&](const Vec& a, const Vec& b) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
  };
  auto axpy = [&](Vec& y, std::complex<double> c, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
  };

  int m = 0;
  bool breakdown = false;
  for (int j = 0; j < m_cap; ++j) {
    Vec w = apply_hamiltonian(h, basis[j]);
    const double a_j = dot(basis[j], w).real();
    alpha.push_back(a_j);
    axpy(w, -a_j, basis[j]);
    if (j > 0) axpy(w, -beta[j - 1], basis[j - 1]);
    // One full reorthogonalization pass keeps the basis clean at these dims.
    for (int k = 0; k <= j; ++k) axpy(w, -dot(basis[k], w), basis[k]);
    double b_j = 0.0;
    for (const auto& c : w) b_j += std::norm(c);
    b_j = std::sqrt(b_j);
    m = j + 1;
    if (b_j < 1e-14) {
      breakdown = true;  // Krylov space is invariant: result is exact
      break;
    }
    beta.push_back(b_j);
    for (auto& c : w) c /= b_j;
    basis.push_back(std::move(w));
  }

  Eigen::MatrixXd t_mat = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t_mat(i, i) = alpha[i];
    if (i + 1 < m) t_mat(i, i + 1) = t_mat(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t_mat);
  Eigen::VectorXcd phases(m);
  for (int i = 0; i < m; ++i)
    phases(i) = std::exp(std::complex<double>(0.0, -es.eigenvalues()(i) * tau));
  Eigen::VectorXcd small = es.eigenvectors() *
                           (phases.asDiagonal() * es.eigenvectors().row(0).transpose().eval());

  Vec out(dim, {0.0, 0.0});
  for (int j = 0; j < m; ++j) axpy(out, small(j), basis[j]);
  psi = std::move(out);

  if (breakdown || m == static_cast<int>(dim)) return 0.0;
  return beta.size() >= static_cast<std::size_t>(m) ? std::abs(beta[m - 1] * small(m - 1)) : 0.0;
}

}  // namespace detail

/// |psi> <- exp(-i H t)|psi> via adaptive Lanczos time stepping (dense scale,
/// <= 12 qubits). The identity offset rides along in the Krylov alphas, so
/// the global phase matches the full Hamiltonian's.
inline void exact_evolve(StateVector& state, const PauliHamiltonian& h, double t,
                         double tolerance = 1e-12) {
  if (h.n_qubits != state.n_qubits) throw ArgumentError("exact_evolve: qubit count mismatch");
  if (state.n_qubits > kMaxDenseQubits)
    throw ScaleError("exact_evolve: qubit count exceeds the dense-evolution cap (12)");
  if (t == 0.0) return;

  const int max_krylov = 48;
  double remaining = std::abs(t);
  const double direction = t > 0 ? 1.0 : -1.0;
  double step = remaining;
  int guard = 0;
  while (remaining > 0.0) {
    if (++guard > 1'000'000) throw ConvergenceError("exact_evolve: step control failed");
    const double tau = std::min(step, remaining);
    std::vector<std::complex<double>> trial = state.amplitudes;
    const double err = detail::lanczos_exp_step(h, trial, direction * tau, max_krylov);
    if (err > tolerance && tau > 1e-12) {
      step = tau / 2.0;
      continue;
    }
    state.amplitudes = std::move(trial);
    remaining -= tau;
    if (err < tolerance / 100.0) step *= 2.0;
  }
}

}  // namespace sqdrift
