// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sqdrift/errors.hpp"

namespace sqdrift {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Row-parallel CSR matvec; each row is reduced serially, so the result is
/// independent of the thread schedule.
inline Eigen::VectorXd sparse_matvec(const SparseMatrix& a, const Eigen::VectorXd& x) {
  Eigen::VectorXd y(a.rows());
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const double* values = a.valuePtr();
#pragma omp parallel for schedule(static)
  for (Eigen::Index row = 0; row < a.rows(); ++row) {
    double acc = 0.0;
    for (int k = outer[row]; k < outer[row + 1]; ++k) acc += values[k] * x(inner[k]);
    y(row) = acc;
  }
  return y;
}

struct EigenSolution {
  std::vector<double> eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;      // dim x k
  std::vector<double> residual_norms;
};

inline constexpr int kDenseSolveLimit = 512;

/// Lowest-k eigenpairs of a sparse symmetric matrix: Davidson iteration with
/// diagonal preconditioning, dense fallback below kDenseSolveLimit.
inline EigenSolution diagonalize(const SparseMatrix& matrix, int k, double tol = 1e-8,
                                 int max_iterations = 500) {
  const Eigen::Index dim = matrix.rows();
  if (k < 1 || k > dim) throw ArgumentError("diagonalize: k out of range [1, dim]");

  if (dim <= kDenseSolveLimit) {
    const Eigen::MatrixXd dense(matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    EigenSolution sol;
    sol.eigenvectors = es.eigenvectors().leftCols(k);
    for (int i = 0; i < k; ++i) {
      sol.eigenvalues.push_back(es.eigenvalues()(i));
      sol.residual_norms.push_back(0.0);
    }
    return sol;
  }

  const Eigen::VectorXd diag = matrix.diagonal();
  const int max_subspace = std::max(20 * k, 2 * k + 4);

  // Start from unit vectors on the k smallest diagonal entries.
  std::vector<Eigen::Index> order(dim);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return diag(a) < diag(b); });
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, k);
  for (int i = 0; i < k; ++i) v(order[i], i) = 1.0;

  Eigen::MatrixXd w(dim, 0);
  std::vector<double> best_residuals(k, std::numeric_limits<double>::infinity());

  for (int iter = 0; iter < max_iterations; ++iter) {
    // Extend W = A V for the new columns.
    const int m_old = static_cast<int>(w.cols());
    const int m = static_cast<int>(v.cols());
    w.conservativeResize(dim, m);
    for (int c = m_old; c < m; ++c) w.col(c) = sparse_matvec(matrix, v.col(c));

    const Eigen::MatrixXd rayleigh = v.transpose() * w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (rayleigh + rayleigh.transpose()));
    const Eigen::MatrixXd ritz_vectors = v * es.eigenvectors().leftCols(k);
    const Eigen::MatrixXd ritz_images = w * es.eigenvectors().leftCols(k);

    bool all_converged = true;
    Eigen::MatrixXd corrections(dim, 0);
    for (int i = 0; i < k; ++i) {
      const double theta = es.eigenvalues()(i);
      Eigen::VectorXd residual = ritz_images.col(i) - theta * ritz_vectors.col(i);
      const double rnorm = residual.norm();
      best_residuals[i] = std::min(best_residuals[i], rnorm);
      if (rnorm <= tol) continue;
      all_converged = false;
      for (Eigen::Index j = 0; j < dim; ++j) {
        double denom = theta - diag(j);
        if (std::abs(denom) < 1e-8) denom = denom < 0 ? -1e-8 : 1e-8;
        residual(j) /= denom;
      }
      corrections.conservativeResize(dim, corrections.cols() + 1);
      corrections.col(corrections.cols() - 1) = residual;
    }

    if (all_converged) {
      EigenSolution sol;
      sol.eigenvectors = ritz_vectors;
      for (int i = 0; i < k; ++i) {
        sol.eigenvalues.push_back(es.eigenvalues()(i));
        sol.residual_norms.push_back((ritz_images.col(i) -
                                      es.eigenvalues()(i) * ritz_vectors.col(i))
                                         .norm());
      }
      return sol;
    }

    if (m + corrections.cols() > max_subspace) {
      // Restart from the current Ritz vectors.
      v = ritz_vectors;
      w = ritz_images;
    }

    int added = 0;
    for (Eigen::Index c = 0; c < corrections.cols(); ++c) {
      Eigen::VectorXd t = corrections.col(c);
      for (int pass = 0; pass < 2; ++pass)
        t -= v * (v.transpose() * t).eval();
      const double tn = t.norm();
      if (tn > 1e-10) {
        v.conservativeResize(dim, v.cols() + 1);
        v.col(v.cols() - 1) = t / tn;
        ++added;
      }
    }
    if (added == 0)
      throw ConvergenceError("diagonalize: Davidson stagnated before reaching tolerance",
                             best_residuals);
  }
  throw ConvergenceError("diagonalize: Davidson did not converge within max iterations",
                         best_residuals);
}

}  // namespace sqdrift
