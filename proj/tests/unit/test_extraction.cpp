#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "thermoknow/error.hpp"
#include "thermoknow/extraction.hpp"

using namespace thermoknow;
using thermoknow::testing::max_abs;
using thermoknow::testing::random_probs;

TEST(Hamiltonian, Validation) {
  EXPECT_THROW(Hamiltonian({1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(Hamiltonian({0.0, std::numeric_limits<double>::infinity()}), InvalidArgument);
  EXPECT_THROW(Hamiltonian::equidistant(3, 0.0), InvalidArgument);
  EXPECT_EQ(Hamiltonian::equidistant(3).energies(), (std::vector<double>{0, 1, 2}));
}

TEST(ThermalState, Limits) {
  const auto h = Hamiltonian::equidistant(4);
  const auto hot = thermal_state(h, 0.0);
  for (double p : hot.probs()) EXPECT_DOUBLE_EQ(p, 0.25);
  const auto cold = thermal_state(h, std::numeric_limits<double>::infinity());
  EXPECT_EQ(cold.probs().entries(), (std::vector<double>{1, 0, 0, 0}));
  EXPECT_THROW(thermal_state(h, -1.0), InvalidArgument);
  EXPECT_THROW(thermal_state(h, std::nan("")), InvalidArgument);
}

TEST(ThermalState, QutritAtLn2) {
  const auto p = thermal_state(Hamiltonian::equidistant(3), std::log(2.0));
  EXPECT_NEAR(p[0], 4.0 / 7, 1e-15);
  EXPECT_NEAR(p[1], 2.0 / 7, 1e-15);
  EXPECT_NEAR(p[2], 1.0 / 7, 1e-15);
}

TEST(ThermalState, PopulationsNonIncreasing) {
  const Hamiltonian h({-1.0, 0.3, 0.3, 2.5});
  for (double beta : {0.0, 0.1, 1.0, 7.0}) {
    const auto p = thermal_state(h, beta);
    for (std::size_t i = 1; i < 4; ++i) EXPECT_LE(p[i], p[i - 1] + 1e-15);
  }
}

TEST(TwoLevelSwap, TranspositionAndIdentity) {
  const auto s = two_level_swap(3, 0, 2);
  EXPECT_TRUE(s.is_unitary());
  EXPECT_EQ(s(2, 0), Complex(1.0));
  EXPECT_EQ(s(1, 1), Complex(1.0));
  EXPECT_LT(max_abs_difference(two_level_swap(3, 1, 1), DenseOperator::identity({3})), 1e-15);
}

TEST(CloneUnitary, CopiesDiagonalStates) {
  for (std::size_t d = 2; d <= 4; ++d)
    for (std::size_t q = 0; q < d; ++q) {
      const auto u = build_clone_unitary(d, q);
      EXPECT_TRUE(u.is_unitary());
      const auto p = random_probs(d);
      const DenseOperator rho({d}, DenseOperator::diagonal(p).matrix());
      const auto out = conjugate(u, kron(rho, DenseOperator::basis_projector(d, q)));
      EXPECT_LT(max_abs_difference(partial_trace(out, {1}), rho), 1e-12);
      EXPECT_LT(max_abs_difference(partial_trace(out, {0}), rho), 1e-12);
    }
  EXPECT_THROW(build_clone_unitary(3, 3), InvalidArgument);
}

TEST(CloneUnitary, QubitIsControlledFlip) {
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  EXPECT_LT((build_clone_unitary(2, 0).matrix() - cnot).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(IeUnitary, QutritMergedBlockActsAsFlip) {
  const auto a = PartitionAssignment::parse("0,1,1");
  const auto u = build_ie_unitary(a);
  EXPECT_TRUE(u.is_unitary());
  // |0>|0> fixed; |1>|0> <-> |1>|1>; |2>|0> <-> |2>|1>.
  EXPECT_EQ(u(0, 0), Complex(1.0));
  EXPECT_EQ(u(3, 2), Complex(1.0));
  EXPECT_EQ(u(2, 3), Complex(1.0));
  EXPECT_EQ(u(5, 4), Complex(1.0));
  EXPECT_THROW(build_ie_unitary(a, 2), InvalidArgument);
}

TEST(ExtractProbe, BlockSums) {
  const ProbabilityVector p({0.5, 0.3, 0.2});
  const auto sigma = extract_probe(DiagonalState(p), PartitionAssignment::parse("0,1,1"));
  EXPECT_DOUBLE_EQ(sigma[0], 0.5);
  EXPECT_DOUBLE_EQ(sigma[1], 0.5);
  const auto uniform = extract_probe(DiagonalState(ProbabilityVector::uniform(6)), PartitionAssignment::parse("0,0,1,1,2,2"));
  for (double x : uniform.probs()) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
  EXPECT_THROW(extract_probe(DiagonalState(p), PartitionAssignment::parse("0,1")), DimensionMismatch);
}

TEST(ExtractProbe, SixLevelWorkedExample) {
  const auto p = random_probs(6);
  const auto sigma = simulate_probe(DenseOperator::diagonal(p), PartitionAssignment::parse("0,1,1,2,2,2"));
  EXPECT_NEAR(sigma(0, 0).real(), p[0], 1e-12);
  EXPECT_NEAR(sigma(1, 1).real(), p[1] + p[2], 1e-12);
  EXPECT_NEAR(sigma(2, 2).real(), p[3] + p[4] + p[5], 1e-12);
}

TEST(ExtractProbe, MatchesDenseSimulationForAllAssignments) {
  for (std::size_t d = 1; d <= 6; ++d)
    for (std::size_t k = 1; k <= d; ++k)
      for (const auto& a : enumerate_assignments(d, k)) {
        const auto p = random_probs(d);
        const auto fast = extract_probe(DiagonalState(p), a);
        const std::size_t reset = (d + k) % k;
        const auto dense = simulate_probe(DenseOperator::diagonal(p), a, reset);
        EXPECT_LT(max_abs(dense.real_diagonal(), fast.probs().entries()), 1e-12) << a.to_string();
        EXPECT_LT(dense.max_off_diagonal(), 1e-12);
      }
}

TEST(IeUnitary, LeavesSystemUndisturbed) {
  for (std::size_t d = 2; d <= 6; ++d)
    for (const auto& a : enumerate_assignments(d, 2)) {
      const auto p = random_probs(d);
      const auto rho = DenseOperator::diagonal(p);
      const auto out = conjugate(build_ie_unitary(a), kron(rho, DenseOperator::basis_projector(2, 0)));
      EXPECT_LT(max_abs_difference(partial_trace(out, {0}), rho), 1e-12);
    }
}

TEST(IeUnitary, SequentialProbesBothCorrect) {
  const auto p = random_probs(4);
  const auto a = PartitionAssignment::parse("0,0,1,1");
  const auto b = PartitionAssignment::parse("0,1,1,1");
  // system ⊗ probe_a ⊗ probe_b
  const auto ua = kron(build_ie_unitary(a), DenseOperator::identity({2}));
  Matrix ub = Matrix::Zero(16, 16);
  const Matrix vb = build_ie_unitary(b).matrix();
  for (int s = 0; s < 4; ++s)
    for (int pa = 0; pa < 2; ++pa)
      for (int s2 = 0; s2 < 4; ++s2)
        for (int pb = 0; pb < 2; ++pb)
          for (int pb2 = 0; pb2 < 2; ++pb2)
            ub(s * 4 + pa * 2 + pb, s2 * 4 + pa * 2 + pb2) = vb(s * 2 + pb, s2 * 2 + pb2);
  const DenseOperator uab({4, 2, 2}, ub * ua.matrix());
  const auto init = kron(kron(DenseOperator::diagonal(p), DenseOperator::basis_projector(2, 0)),
                         DenseOperator::basis_projector(2, 0));
  const auto out = conjugate(uab, init);
  EXPECT_LT(max_abs(partial_trace(out, {1}).real_diagonal(), extract_probe(DiagonalState(p), a).probs().entries()), 1e-12);
  EXPECT_LT(max_abs(partial_trace(out, {2}).real_diagonal(), extract_probe(DiagonalState(p), b).probs().entries()), 1e-12);
}
