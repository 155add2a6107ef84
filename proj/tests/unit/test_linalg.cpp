#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "thermoknow/error.hpp"
#include "thermoknow/linalg.hpp"

using namespace thermoknow;
using thermoknow::testing::random_density;
using thermoknow::testing::random_probs;

namespace {

// Brute-force reduced operator on subsystem `keep` of a bipartite operator.
Matrix trace_out_oracle(const Matrix& m, std::size_t da, std::size_t db, bool keep_first) {
  const std::size_t keep = keep_first ? da : db;
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(keep));
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t b2 = 0; b2 < db; ++b2) {
          const bool traced_equal = keep_first ? (b == b2) : (a == a2);
          if (!traced_equal) continue;
          const auto r = static_cast<Eigen::Index>(keep_first ? a : b);
          const auto c = static_cast<Eigen::Index>(keep_first ? a2 : b2);
          out(r, c) += m(static_cast<Eigen::Index>(a * db + b), static_cast<Eigen::Index>(a2 * db + b2));
        }
  return out;
}

}  // namespace

TEST(ProbabilityVector, ClipsTinyNegativesAndRejectsBadInput) {
  ProbabilityVector p({0.5, 0.5 + 1e-13, -1e-13});
  EXPECT_EQ(p[2], 0.0);
  EXPECT_THROW(ProbabilityVector({0.6, 0.6}), InvalidArgument);
  EXPECT_THROW(ProbabilityVector({1.2, -0.2}), InvalidArgument);
  EXPECT_THROW(ProbabilityVector(std::vector<double>{}), InvalidArgument);
}

TEST(DenseOperator, RejectsInconsistentDims) {
  EXPECT_THROW(DenseOperator({2, 2}, Matrix::Identity(3, 3)), DimensionMismatch);
  EXPECT_THROW(DenseOperator(Matrix::Zero(2, 3)), DimensionMismatch);
}

TEST(PartialTrace, ProductStateFactorizes) {
  const auto a = random_density(3);
  const auto b = random_density(2);
  const auto ab = kron(a, b);
  EXPECT_LT(max_abs_difference(partial_trace(ab, {0}), a), 1e-14);
  EXPECT_LT(max_abs_difference(partial_trace(ab, {1}), b), 1e-14);
}

TEST(PartialTrace, BellStateMarginalIsMaximallyMixed) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  const DenseOperator bell({2, 2}, psi * psi.adjoint());
  const auto marginal = partial_trace(bell, {0});
  EXPECT_NEAR(marginal(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(marginal(1, 1).real(), 0.5, 1e-15);
  EXPECT_LT(marginal.max_off_diagonal(), 1e-15);
}

TEST(PartialTrace, MatchesIndexSumOracle) {
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = random_density(9);
    const DenseOperator op({3, 3}, rho.matrix());
    EXPECT_LT((partial_trace(op, {0}).matrix() - trace_out_oracle(rho.matrix(), 3, 3, true)).cwiseAbs().maxCoeff(),
              1e-14);
    EXPECT_LT((partial_trace(op, {1}).matrix() - trace_out_oracle(rho.matrix(), 3, 3, false)).cwiseAbs().maxCoeff(),
              1e-14);
  }
  const auto diag = DenseOperator::diagonal(random_probs(9));
  const DenseOperator op({3, 3}, diag.matrix());
  EXPECT_LT((partial_trace(op, {1}).matrix() - trace_out_oracle(diag.matrix(), 3, 3, false)).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(PartialTrace, PreservesTraceAndHermiticity) {
  for (std::size_t d = 2; d <= 6; ++d) {
    const auto rho = random_density(d * 2 * 3);
    const DenseOperator op({d, 2, 3}, rho.matrix());
    for (auto keep : {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {1, 2}}) {
      const auto r = partial_trace(op, keep);
      EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);
      EXPECT_TRUE(r.is_hermitian());
    }
  }
}

TEST(PartialTrace, RejectsBadIndices) {
  const auto op = DenseOperator::identity({2, 2});
  EXPECT_THROW(partial_trace(op, {2}), InvalidArgument);
  EXPECT_THROW(partial_trace(op, {0, 0}), InvalidArgument);
  EXPECT_THROW(partial_trace(op, std::span<const std::size_t>{}), InvalidArgument);
}

TEST(Fidelity, IdenticalStatesGiveOne) {
  const auto rho = random_density(4);
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-10);
}

TEST(Fidelity, DiagonalMatchesBhattacharyyaForm) {
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_probs(5);
    const auto q = random_probs(5);
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += std::sqrt(p[i] * q[i]);
    EXPECT_NEAR(fidelity(DenseOperator::diagonal(p), DenseOperator::diagonal(q)), s * s, 1e-10);
  }
}

TEST(Fidelity, IsSymmetric) {
  const auto a = random_density(3);
  const auto b = random_density(3);
  EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-10);
  EXPECT_LT(fidelity(a, b), 1.0 - 1e-6);
}

TEST(Fidelity, RejectsNonDensity) {
  EXPECT_THROW(fidelity(DenseOperator::identity({2}), DenseOperator::basis_projector(2, 0)), InvalidArgument);
}

TEST(Entropy, VonNeumannKnownValues) {
  EXPECT_NEAR(von_neumann_entropy(DenseOperator::basis_projector(3, 1)), 0.0, 1e-14);
  EXPECT_NEAR(von_neumann_entropy(DenseOperator::diagonal(ProbabilityVector::uniform(4))), std::log(4.0), 1e-14);
  const std::vector<double> p{0.5, 0.25, 0.25};
  const double oracle = -(0.5 * std::log(0.5) + 2 * 0.25 * std::log(0.25));
  EXPECT_NEAR(von_neumann_entropy(DenseOperator::diagonal(p)), oracle, 1e-14);
  EXPECT_NEAR(shannon_entropy(p), oracle, 1e-15);
}

TEST(Entropy, InvariantUnderUnitaryConjugation) {
  const auto rho = random_density(4);
  const DenseOperator u(thermoknow::testing::random_unitary(4));
  EXPECT_NEAR(von_neumann_entropy(conjugate(u, rho)), von_neumann_entropy(rho), 1e-10);
}

TEST(RelativeEntropy, ZeroOnEqualAndDivergentOnDisjointSupport) {
  const auto rho = random_density(3);
  EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-10);
  const double d = relative_entropy(DenseOperator::basis_projector(2, 0), DenseOperator::basis_projector(2, 1));
  EXPECT_TRUE(is_divergent(d));
}

TEST(RelativeEntropy, DiagonalMatchesScalarOracle) {
  const auto p = random_probs(4);
  const auto q = random_probs(4);
  double oracle = 0.0;
  for (std::size_t i = 0; i < 4; ++i) oracle += p[i] * (std::log(p[i]) - std::log(q[i]));
  EXPECT_NEAR(relative_entropy(DenseOperator::diagonal(p), DenseOperator::diagonal(q)), oracle, 1e-12);
}

TEST(MutualInformation, ProductIsZeroBellIsTwoLog2) {
  EXPECT_NEAR(mutual_information(kron(random_density(2), random_density(3)), Bipartition{{0}}), 0.0, 1e-10);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(mutual_information(DenseOperator({2, 2}, psi * psi.adjoint()), Bipartition{{0}}), 2 * std::log(2.0),
              1e-10);
}

TEST(Majorization, BasicCasesAndOrderProperties) {
  const std::vector<double> sharp{0.7, 0.2, 0.1};
  const std::vector<double> flat{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_TRUE(majorizes(sharp, flat));
  EXPECT_FALSE(majorizes(flat, sharp));
  EXPECT_TRUE(majorizes(sharp, sharp));
  // Order of entries does not matter.
  EXPECT_TRUE(majorizes(std::vector<double>{0.1, 0.7, 0.2}, flat));
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_probs(4);
    const auto b = random_probs(4);
    if (majorizes(a, b) && majorizes(b, a)) {
      auto sa = ProbabilityVector(a).sorted_descending();
      auto sb = ProbabilityVector(b).sorted_descending();
      EXPECT_LT(thermoknow::testing::max_abs(sa, sb), 1e-9);
    }
    const auto c = random_probs(4);
    if (majorizes(a, b) && majorizes(b, c)) EXPECT_TRUE(majorizes(a, c));
  }
}

TEST(DescendingOrder, StableOnTies) {
  const std::vector<double> v{0.25, 0.5, 0.25, 0.0};
  EXPECT_EQ(descending_order(v), (std::vector<std::size_t>{1, 0, 2, 3}));
}

TEST(PsdSqrt, SquaresBack) {
  const auto rho = random_density(4);
  const Matrix r = psd_sqrt(rho.matrix());
  EXPECT_LT((r * r - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}
