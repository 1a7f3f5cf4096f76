// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "sqdrift/errors.hpp"
#include "sqdrift/pauli.hpp"
#include "sqdrift/rng.hpp"
#include "sqdrift/statevector.hpp"

namespace sqdrift {

struct PauliRotation {
  PauliString op;
  double angle = 0.0;  // exp(-i angle P)
};

/// One sampled randomized-evolution realization: N single-term rotations,
/// each with |angle| = t * lambda / N and the term coefficient's sign folded
/// into the angle.
struct QDriftSequence {
  std::vector<PauliRotation> rotations;
  double total_time = 0.0;
  std::uint64_t n_samples = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
};

/// Draws N terms with probability |c_k| / lambda. Reproducible: the sequence
/// is a pure function of the rng stream key.
inline QDriftSequence sample_sequence(const PauliHamiltonian& h, double t, std::uint64_t n_samples,
                                      Rng rng) {
  QDriftSequence seq;
  seq.total_time = t;
  seq.n_samples = n_samples;
  seq.lambda = lambda_norm(h);
  seq.seed = rng.key();
  if (n_samples == 0) return seq;
  if (!(seq.lambda > 0.0))
    throw ArgumentError("sample_sequence: degenerate Hamiltonian (lambda = 0) with N > 0");

  std::vector<double> cdf(h.terms.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < h.terms.size(); ++k) cdf[k] = (acc += std::abs(h.terms[k].coefficient));

  const double magnitude = t * seq.lambda / static_cast<double>(n_samples);
  seq.rotations.reserve(n_samples);
  for (std::uint64_t j = 0; j < n_samples; ++j) {
    const std::size_t k = rng.sample_cdf(cdf);
    const double sign = h.terms[k].coefficient < 0.0 ? -1.0 : 1.0;
    seq.rotations.push_back({h.terms[k].op, sign * magnitude});
  }
  return seq;
}

/// {0, dt, 2 dt, ..., depth * dt}.
inline std::vector<double> krylov_time_grid(double dt, int depth) {
  if (!(dt > 0.0)) throw ArgumentError("krylov_time_grid: dt must be positive");
  if (depth < 0) throw ArgumentError("krylov_time_grid: depth must be >= 0");
  std::vector<double> grid(depth + 1);
  for (int i = 0; i <= depth; ++i) grid[i] = i * dt;
  return grid;
}

/// Applies the sequence's rotations in order.
inline void evolve(StateVector& state, const QDriftSequence& seq) {
  for (const auto& r : seq.rotations) apply_pauli_rotation(state, r.op, r.angle);
}

/// Dense test-scale density matrix (n <= 8 qubits).
struct DensityEstimate {
  int n_qubits = 0;
  Eigen::MatrixXcd matrix;

  static DensityEstimate pure(const StateVector& state) {
    DensityEstimate d;
    d.n_qubits = state.n_qubits;
    const Eigen::Map<const Eigen::VectorXcd> v(state.amplitudes.data(),
                                               static_cast<Eigen::Index>(state.dim()));
    d.matrix = v * v.adjoint();
    return d;
  }

  void validate() const {
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw DataError("DensityEstimate: not Hermitian");
    if (std::abs(matrix.trace().real() - 1.0) > 1e-10 || std::abs(matrix.trace().imag()) > 1e-10)
      throw DataError("DensityEstimate: trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix);
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw DataError("DensityEstimate: negative eigenvalue beyond tolerance");
  }
};

namespace detail {

inline Eigen::MatrixXcd dense_pauli_hamiltonian(const PauliHamiltonian& h) {
  const Eigen::Index dim = Eigen::Index{1} << h.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  m.diagonal().setConstant(h.identity_offset);
  for (const auto& t : h.terms)
    for (Eigen::Index b = 0; b < dim; ++b)
      m(b ^ static_cast<Eigen::Index>(t.op.x_mask), b) +=
          t.coefficient * t.op.basis_phase(static_cast<std::uint64_t>(b));
  return m;
}

inline Eigen::MatrixXcd dense_evolved_density(const PauliHamiltonian& h,
                                              const Eigen::MatrixXcd& rho, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_pauli_hamiltonian(h));
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(std::complex<double>(0.0, -es.eigenvalues()(i) * t));
  const Eigen::MatrixXcd u_t = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return u_t * rho * u_t.adjoint();
}

inline double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd d = a - b;
  const Eigen::MatrixXcd herm = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace detail

/// Trace distance between the empirical qDRIFT channel average over
/// n_realizations sequences and the exact evolved state. rho0 must be at
/// test scale (n <= 8). Realizations use split rng streams, and the average
/// is accumulated in realization order, so the result does not depend on
/// execution interleaving.
inline double estimate_channel_error(const PauliHamiltonian& h, const DensityEstimate& rho0,
                                     double t, std::uint64_t n_samples, int n_realizations,
                                     Rng rng) {
  if (h.n_qubits > 8)
    throw ScaleError("estimate_channel_error: qubit count exceeds the dense test-scale bound (8)");
  if (rho0.n_qubits != h.n_qubits)
    throw ArgumentError("estimate_channel_error: qubit count mismatch");
  if (n_realizations < 1) throw ArgumentError("estimate_channel_error: n_realizations must be >= 1");

  const Eigen::Index dim = Eigen::Index{1} << h.n_qubits;
  const double purity = (rho0.matrix * rho0.matrix).trace().real();

  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(dim, dim);
  if (std::abs(purity - 1.0) < 1e-12) {
    // Pure input: evolve the state itself.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0.matrix);
    Eigen::Index top = 0;
    es.eigenvalues().maxCoeff(&top);
    StateVector psi0;
    psi0.n_qubits = h.n_qubits;
    psi0.amplitudes.assign(es.eigenvectors().col(top).data(),
                           es.eigenvectors().col(top).data() + dim);
    std::vector<Eigen::VectorXcd> evolved(n_realizations);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n_realizations; ++r) {
      StateVector psi = psi0;
      evolve(psi, sample_sequence(h, t, n_samples, rng.derive({static_cast<std::uint64_t>(r)})));
      evolved[r] = Eigen::Map<const Eigen::VectorXcd>(psi.amplitudes.data(), dim);
    }
    for (int r = 0; r < n_realizations; ++r) avg += evolved[r] * evolved[r].adjoint();
  } else {
    // Mixed input: build each realization's unitary column by column.
    for (int r = 0; r < n_realizations; ++r) {
      const auto seq = sample_sequence(h, t, n_samples, rng.derive({static_cast<std::uint64_t>(r)}));
      Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(dim, dim);
      for (Eigen::Index col = 0; col < dim; ++col) {
        StateVector psi;
        psi.n_qubits = h.n_qubits;
        psi.amplitudes.assign(v.col(col).data(), v.col(col).data() + dim);
        evolve(psi, seq);
        for (Eigen::Index row = 0; row < dim; ++row) v(row, col) = psi.amplitudes[row];
      }
      avg += v * rho0.matrix * v.adjoint();
    }
  }
  avg /= static_cast<double>(n_realizations);
  return detail::trace_distance(avg, detail::dense_evolved_density(h, rho0.matrix, t));
}

}  // namespace sqdrift
