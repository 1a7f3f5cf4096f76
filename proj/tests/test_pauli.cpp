// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "sqdrift/pauli.hpp"
#include "sqdrift/rng.hpp"
#include "test_util.hpp"

using namespace sqdrift;

namespace {

PauliHamiltonian two_term_fixture() {
  PauliHamiltonian h;
  h.n_qubits = 2;
  h.terms.push_back({0.3, PauliString::from_label("XI")});
  h.terms.push_back({-0.4, PauliString::from_label("IY")});
  return h;
}

}  // namespace

TEST(PauliString, LabelRoundTrip) {
  const auto p = PauliString::from_label("XZZY");
  EXPECT_EQ(p.label(), "XZZY");
  EXPECT_EQ(p.n_qubits, 4);
  EXPECT_EQ(p.x_mask, 0b1001ull);
  EXPECT_EQ(p.z_mask, 0b1110ull);
  EXPECT_TRUE(PauliString::from_label("II").is_identity());
}

TEST(Lambda, SmallCases) {
  EXPECT_DOUBLE_EQ(lambda_norm(two_term_fixture()), 0.7);
  EXPECT_DOUBLE_EQ(lambda_norm(PauliHamiltonian{}), 0.0);
}

TEST(Lambda, InvariantUnderReorderAndSignFlips) {
  Rng rng(13);
  PauliHamiltonian h;
  h.n_qubits = 3;
  const char* labels[] = {"XII", "IYI", "ZZI", "IIZ", "YXZ"};
  for (const char* l : labels)
    h.terms.push_back({2.0 * rng.next_double() - 1.0, PauliString::from_label(l)});
  const double lambda = lambda_norm(h);
  std::reverse(h.terms.begin(), h.terms.end());
  EXPECT_DOUBLE_EQ(lambda_norm(h), lambda);
  for (auto& t : h.terms) t.coefficient = -t.coefficient;
  EXPECT_DOUBLE_EQ(lambda_norm(h), lambda);
}

TEST(SamplingDistribution, SmallCases) {
  const auto p = sampling_distribution(two_term_fixture());
  ASSERT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p[0], 3.0 / 7.0);
  EXPECT_DOUBLE_EQ(p[1], 4.0 / 7.0);

  PauliHamiltonian single;
  single.n_qubits = 1;
  single.terms.push_back({-2.5, PauliString::from_label("Z")});
  const auto q = sampling_distribution(single);
  ASSERT_EQ(q.size(), 1u);
  EXPECT_DOUBLE_EQ(q[0], 1.0);
}

TEST(SamplingDistribution, SumsToOne) {
  Rng rng(101);
  PauliHamiltonian h;
  h.n_qubits = 4;
  for (int i = 0; i < 40; ++i) {
    PauliString p{4, rng.next_below(16), rng.next_below(16)};
    if (p.is_identity()) continue;
    h.terms.push_back({2.0 * rng.next_double() - 1.0, p});
  }
  const auto dist = sampling_distribution(h);
  double sum = 0.0;
  for (double x : dist) sum += x;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(SamplingDistribution, DegenerateHamiltonianRejected) {
  PauliHamiltonian empty;
  empty.n_qubits = 2;
  EXPECT_THROW(sampling_distribution(empty), ArgumentError);
}

TEST(TermExport, FormatAndPrecision) {
  PauliHamiltonian h;
  h.n_qubits = 4;
  h.identity_offset = 1.0 / 3.0;
  h.terms.push_back({-0.045, PauliString::from_label("XZZY")});
  std::ostringstream out;
  write_pauli_terms(out, h);
  EXPECT_EQ(out.str(),
            "0.33333333333333331  IIII\n"
            "-0.044999999999999998  XZZY\n");
}

TEST(BasisPhase, YStringActsWithCorrectPhase) {
  // Y|0> = i|1>, Y|1> = -i|0>.
  const auto y = PauliString::from_label("Y");
  EXPECT_EQ(y.basis_phase(0b0), std::complex<double>(0, 1));
  EXPECT_EQ(y.basis_phase(0b1), std::complex<double>(0, -1));
  // Z|1> = -|1>.
  const auto z = PauliString::from_label("Z");
  EXPECT_EQ(z.basis_phase(0b1), std::complex<double>(-1, 0));
}
