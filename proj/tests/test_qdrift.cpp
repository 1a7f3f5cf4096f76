// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "oracle/dense_fermion.hpp"
#include "sqdrift/fcidump.hpp"
#include "sqdrift/jordan_wigner.hpp"
#include "sqdrift/qdrift.hpp"
#include "test_util.hpp"

using namespace sqdrift;
using Complex = std::complex<double>;

namespace {

PauliHamiltonian h2_mapped() {
  static const PauliHamiltonian h =
      jordan_wigner(parse_fcidump_file(testutil::fixture_path("h2_sto3g.fcidump")));
  return h;
}

}  // namespace

TEST(KrylovGrid, Examples) {
  EXPECT_EQ(krylov_time_grid(0.5, 3), (std::vector<double>{0.0, 0.5, 1.0, 1.5}));
  EXPECT_EQ(krylov_time_grid(1.0, 0), (std::vector<double>{0.0}));
  EXPECT_EQ(krylov_time_grid(1.0, 2), (std::vector<double>{0.0, 1.0, 2.0}));
  EXPECT_THROW(krylov_time_grid(0.0, 2), ArgumentError);
  EXPECT_THROW(krylov_time_grid(-1.0, 2), ArgumentError);
}

TEST(SampleSequence, EmptyBudgetGivesIdentity) {
  const auto seq = sample_sequence(h2_mapped(), 1.0, 0, Rng(1));
  EXPECT_TRUE(seq.rotations.empty());
  StateVector s = prepare_determinant(hartree_fock_determinant(2, 1, 1), 4);
  const auto before = s.amplitudes;
  evolve(s, seq);
  EXPECT_EQ(s.amplitudes, before);
}

TEST(SampleSequence, DegenerateHamiltonianRejected) {
  PauliHamiltonian empty;
  empty.n_qubits = 2;
  EXPECT_THROW(sample_sequence(empty, 1.0, 5, Rng(1)), ArgumentError);
}

TEST(SampleSequence, SingleTermIsExact) {
  PauliHamiltonian h;
  h.n_qubits = 2;
  const double c = -0.35;
  h.terms.push_back({c, PauliString::from_label("ZI")});
  const double t = 1.7;
  for (std::uint64_t n : {1ull, 7ull, 64ull}) {
    const auto seq = sample_sequence(h, t, n, Rng(n));
    ASSERT_EQ(seq.rotations.size(), n);
    StateVector s = StateVector::zero_state(2);
    s.amplitudes[0b00] = std::sqrt(0.5);
    s.amplitudes[0b01] = std::sqrt(0.5);
    evolve(s, seq);
    // exp(-i c t Z0): |0> phase e^{-ict}, |1> phase e^{+ict}.
    EXPECT_NEAR(std::abs(s.amplitudes[0b00] - std::sqrt(0.5) * std::exp(Complex(0, -c * t))), 0.0,
                1e-12);
    EXPECT_NEAR(std::abs(s.amplitudes[0b01] - std::sqrt(0.5) * std::exp(Complex(0, c * t))), 0.0,
                1e-12);
  }
}

TEST(SampleSequence, DeterministicForFixedSeed) {
  const auto a = sample_sequence(h2_mapped(), 0.8, 100, Rng(42));
  const auto b = sample_sequence(h2_mapped(), 0.8, 100, Rng(42));
  ASSERT_EQ(a.rotations.size(), b.rotations.size());
  for (std::size_t i = 0; i < a.rotations.size(); ++i) {
    EXPECT_TRUE(a.rotations[i].op == b.rotations[i].op);
    EXPECT_EQ(a.rotations[i].angle, b.rotations[i].angle);
  }
  const auto c = sample_sequence(h2_mapped(), 0.8, 100, Rng(43));
  bool same = true;
  for (std::size_t i = 0; i < a.rotations.size() && same; ++i)
    same = a.rotations[i].op == c.rotations[i].op;
  EXPECT_FALSE(same);
}

TEST(SampleSequence, AnglesPartitionTheRotationBudget) {
  const double t = 0.9;
  for (std::uint64_t n : {1ull, 13ull, 300ull}) {
    const auto seq = sample_sequence(h2_mapped(), t, n, Rng(7 + n));
    double total = 0.0;
    const double each = t * seq.lambda / static_cast<double>(n);
    for (const auto& r : seq.rotations) {
      EXPECT_DOUBLE_EQ(std::abs(r.angle), each);
      total += std::abs(r.angle);
    }
    EXPECT_NEAR(total, t * seq.lambda, 1e-12);
  }
}

TEST(SampleSequence, FrequenciesMatchSamplingDistribution) {
  const auto h = h2_mapped();
  const auto p = sampling_distribution(h);
  std::vector<double> observed(h.terms.size(), 0.0);
  const std::uint64_t n_draws = 100000;
  const auto seq = sample_sequence(h, 1.0, n_draws, Rng(2024));
  for (const auto& r : seq.rotations) {
    for (std::size_t k = 0; k < h.terms.size(); ++k)
      if (h.terms[k].op == r.op &&
          (h.terms[k].coefficient < 0) == (r.angle < 0)) {
        observed[k] += 1.0;
        break;
      }
  }
  const double stat = testutil::chi_square(observed, p, static_cast<double>(n_draws));
  EXPECT_LT(stat, testutil::chi_square_critical(static_cast<int>(p.size()) - 1, 0.001));
}

TEST(Evolve, ReversedNegatedSequenceRestoresState) {
  auto seq = sample_sequence(h2_mapped(), 1.3, 200, Rng(88));
  StateVector s = prepare_determinant(hartree_fock_determinant(2, 1, 1), 4);
  const auto original = s.amplitudes;
  evolve(s, seq);
  std::reverse(seq.rotations.begin(), seq.rotations.end());
  for (auto& r : seq.rotations) r.angle = -r.angle;
  evolve(s, seq);
  for (std::size_t b = 0; b < s.dim(); ++b)
    EXPECT_NEAR(std::abs(s.amplitudes[b] - original[b]), 0.0, 1e-9);
}

TEST(Evolve, ConservesParticleNumberOnH2) {
  // Every mapped H2 string touches both orbitals of a spin sector, so even
  // individual sampled rotations keep the Hamming weight at 2 here.
  const auto seq = sample_sequence(h2_mapped(), 2.0, 500, Rng(12));
  StateVector s = prepare_determinant(hartree_fock_determinant(2, 1, 1), 4);
  evolve(s, seq);
  EXPECT_NEAR(s.norm(), 1.0, 1e-10);
  for (std::size_t b = 0; b < s.dim(); ++b)
    if (std::popcount(b) != 2) EXPECT_LT(std::abs(s.amplitudes[b]), 1e-9);
}

TEST(DensityEstimateType, PureStatePassesValidation) {
  Rng rng(3);
  StateVector s = StateVector::zero_state(3);
  for (auto& a : s.amplitudes) a = Complex(rng.next_double(), rng.next_double());
  const double n = s.norm();
  for (auto& a : s.amplitudes) a /= n;
  const auto rho = DensityEstimate::pure(s);
  EXPECT_NO_THROW(rho.validate());
}

TEST(ChannelError, ZeroAtZeroTime) {
  const auto h = h2_mapped();
  const auto rho = DensityEstimate::pure(prepare_determinant(hartree_fock_determinant(2, 1, 1), 4));
  EXPECT_NEAR(estimate_channel_error(h, rho, 0.0, 50, 3, Rng(1)), 0.0, 1e-12);
}

TEST(ChannelError, SingleTermHamiltonianIsNoiseless) {
  PauliHamiltonian h;
  h.n_qubits = 2;
  h.terms.push_back({0.6, PauliString::from_label("XZ")});
  StateVector s = StateVector::zero_state(2);
  s.amplitudes[0] = 0.6;
  s.amplitudes[3] = 0.8;
  const auto rho = DensityEstimate::pure(s);
  EXPECT_NEAR(estimate_channel_error(h, rho, 0.7, 25, 1, Rng(9)), 0.0, 1e-10);
}

TEST(ChannelError, ScaleCapEnforced) {
  PauliHamiltonian h;
  h.n_qubits = 9;
  h.terms.push_back({1.0, PauliString{9, 1, 0}});
  DensityEstimate rho;
  rho.n_qubits = 9;
  EXPECT_THROW(estimate_channel_error(h, rho, 1.0, 10, 1, Rng(1)), ScaleError);
}

TEST(ChannelError, MixedStatePathAgreesWithPurePath) {
  // A mixed rho that is numerically pure up to 1e-3 exercises the generic
  // path; compare against the pure path on the same pure component.
  const auto h = h2_mapped();
  const auto psi = prepare_determinant(hartree_fock_determinant(2, 1, 1), 4);
  const auto rho_pure = DensityEstimate::pure(psi);
  DensityEstimate rho_mixed;
  rho_mixed.n_qubits = 4;
  rho_mixed.matrix = 0.5 * rho_pure.matrix +
                     0.5 * Eigen::MatrixXcd::Identity(16, 16) / 16.0;
  // Identity component is invariant under any unitary channel, so the
  // mixed-state error is exactly half the pure-state error.
  const double err_pure = estimate_channel_error(h, rho_pure, 0.4, 40, 20, Rng(5));
  const double err_mixed = estimate_channel_error(h, rho_mixed, 0.4, 40, 20, Rng(5));
  EXPECT_NEAR(err_mixed, 0.5 * err_pure, 1e-9);
}

TEST(ChannelError, ErrorShrinksWithLargerBudget) {
  // Coarse 1/N check at unit-test scale; the acceptance suite runs the
  // full-precision version.
  const auto h = h2_mapped();
  const auto rho = DensityEstimate::pure(prepare_determinant(hartree_fock_determinant(2, 1, 1), 4));
  const double t = 2.0 / lambda_norm(h);
  const double err_small = estimate_channel_error(h, rho, t, 100, 400, Rng(31));
  const double err_large = estimate_channel_error(h, rho, t, 400, 400, Rng(31));
  EXPECT_LT(err_large, err_small);
}
