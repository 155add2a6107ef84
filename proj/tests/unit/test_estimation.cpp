#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "thermoknow/error.hpp"
#include "thermoknow/estimation.hpp"

using namespace thermoknow;
using thermoknow::testing::max_abs;
using thermoknow::testing::random_density;
using thermoknow::testing::random_probs;

namespace {

// Swaps |1,0>↔|0,1> and |2,0>↔|0,3>, then a Hadamard on {|0,1>,|1,2>} and a
// three-level Fourier transform on {|0,3>,|1,4>,|2,5>}; probe ⊗ memory = 3 ⊗ 6.
Matrix six_level_reference() {
  const auto at = [](int probe, int memory) { return probe * 6 + memory; };
  Matrix swaps = Matrix::Identity(18, 18);
  for (auto [a, b] : {std::pair{at(1, 0), at(0, 1)}, std::pair{at(2, 0), at(0, 3)}}) {
    swaps(a, a) = swaps(b, b) = 0.0;
    swaps(a, b) = swaps(b, a) = 1.0;
  }
  Matrix f = Matrix::Identity(18, 18);
  const double h = 1.0 / std::sqrt(2.0);
  const int two[] = {at(0, 1), at(1, 2)};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) f(two[r], two[c]) = (r == 1 && c == 1) ? -h : h;
  const int three[] = {at(0, 3), at(1, 4), at(2, 5)};
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) f(three[r], three[c]) = std::pow(w, r * c) / std::sqrt(3.0);
  return f * swaps;
}

std::vector<double> memory_diagonal_after_eg(const PartitionAssignment& a, const std::vector<double>& sigma) {
  const auto init = kron(DenseOperator::diagonal(sigma), DenseOperator::basis_projector(a.d(), 0));
  return partial_trace(conjugate(build_eg_unitary(a), init), {1}).real_diagonal();
}

}  // namespace

TEST(Estimate, QutritCoarseBlock) {
  const ProbabilityVector p({0.5, 0.3, 0.2});
  const auto est = estimate_from_state(DiagonalState(p), PartitionAssignment::parse("0,1,1"));
  EXPECT_DOUBLE_EQ(est.state[0], 0.5);
  EXPECT_DOUBLE_EQ(est.state[1], 0.25);
  EXPECT_DOUBLE_EQ(est.state[2], 0.25);
}

TEST(Estimate, FullControlReproducesState) {
  const auto p = random_probs(5);
  const auto est = estimate_from_state(DiagonalState(p), PartitionAssignment::parse("0,1,2,3,4"));
  EXPECT_LT(max_abs(est.state.probs().entries(), p), 1e-16);
}

TEST(Estimate, SixLevelBlocksAndPartitionSums) {
  const auto p = random_probs(6);
  const auto a = PartitionAssignment::parse("0,1,1,2,2,2");
  const auto est = estimate_from_state(DiagonalState(p), a);
  const double b1 = (p[1] + p[2]) / 2;
  const double b2 = (p[3] + p[4] + p[5]) / 3;
  const std::vector<double> expect{p[0], b1, b1, b2, b2, b2};
  EXPECT_LT(max_abs(est.state.probs().entries(), expect), 1e-15);
  // Block constancy and preserved block sums for every assignment of d = 5.
  const auto q = random_probs(5);
  for (std::size_t k = 1; k <= 5; ++k)
    for (const auto& b : enumerate_assignments(5, k)) {
      const auto e = estimate_from_state(DiagonalState(q), b);
      for (const auto& levels : b.blocks()) {
        double s = 0.0, t = 0.0;
        for (auto l : levels) {
          s += q[l];
          t += e.state[l];
          EXPECT_DOUBLE_EQ(e.state[l], e.state[levels.front()]);
        }
        EXPECT_NEAR(s, t, 1e-15);
      }
    }
}

TEST(EgUnitary, SixLevelMatchesSwapHadamardFourierComposite) {
  const auto u = build_eg_unitary(PartitionAssignment::parse("0,1,1,2,2,2"));
  EXPECT_LT((u.matrix() - six_level_reference()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EgUnitary, UnitaryForEveryAssignment) {
  for (std::size_t d = 1; d <= 5; ++d)
    for (std::size_t k = 1; k <= d; ++k)
      for (const auto& a : enumerate_assignments(d, k)) {
        if (a.setting().max_block() > k) continue;
        EXPECT_TRUE(build_eg_unitary(a).is_unitary(1e-12)) << a.to_string();
      }
}

TEST(EgUnitary, TrivialSettingIsPermutation) {
  const auto a = PartitionAssignment::parse("0,1,2,3");
  const auto u = build_eg_unitary(a);
  for (Eigen::Index r = 0; r < u.matrix().rows(); ++r) {
    int ones = 0;
    for (Eigen::Index c = 0; c < u.matrix().cols(); ++c) {
      const double v = std::abs(u.matrix()(r, c));
      EXPECT_TRUE(v < 1e-15 || std::abs(v - 1.0) < 1e-15);
      ones += v > 0.5;
    }
    EXPECT_EQ(ones, 1);
  }
  const auto sigma = random_probs(4);
  EXPECT_LT(max_abs(memory_diagonal_after_eg(a, sigma), sigma), 1e-15);
}

TEST(EgUnitary, MarginalMatchesAnalyticAndIsDiagonal) {
  for (std::size_t d = 2; d <= 6; ++d)
    for (std::size_t k = 2; k <= d; ++k)
      for (const auto& a : enumerate_assignments(d, k)) {
        if (a.setting().max_block() > k) continue;
        const auto sigma = random_probs(k);
        const ProbeState probe(ProbabilityVector(sigma), a);
        const auto init = kron(DenseOperator::diagonal(sigma), DenseOperator::basis_projector(d, 0));
        const auto mem = partial_trace(conjugate(build_eg_unitary(a), init), {1});
        EXPECT_LT(max_abs(mem.real_diagonal(), estimate_from_probe(probe).state.probs().entries()), 1e-12);
        EXPECT_LT(mem.max_off_diagonal(), 1e-12);
      }
}

TEST(EgUnitary, RefusesOversizedBlocks) {
  EXPECT_THROW(build_eg_unitary(PartitionAssignment::parse("0,0,0,1,1,1")), ProbeTooSmall);
  // The analytic path still works.
  const auto est = estimate_from_state(DiagonalState(ProbabilityVector::uniform(6)), PartitionAssignment::parse("0,0,0,1,1,1"));
  for (double x : est.state.probs()) EXPECT_NEAR(x, 1.0 / 6, 1e-15);
}

TEST(CoarsePovm, QutritElements) {
  const auto ch = coarse_povm(PartitionAssignment::parse("0,1,1"));
  ASSERT_EQ(ch.povm().size(), 3u);
  EXPECT_EQ(ch.povm().elements()[0].real_diagonal(), (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(ch.povm().elements()[1].real_diagonal(), (std::vector<double>{0, 0.5, 0.5}));
  EXPECT_EQ(ch.povm().elements()[2].real_diagonal(), (std::vector<double>{0, 0.5, 0.5}));
  EXPECT_EQ(ch.preps()[2].real_diagonal(), (std::vector<double>{0, 0, 1}));
}

TEST(CoarsePovm, FullControlIsProjective) {
  const auto ch = coarse_povm(PartitionAssignment::parse("0,1,2"));
  EXPECT_TRUE(is_projective(ch.povm()));
  const auto p = random_probs(3);
  EXPECT_LT(max_abs(apply_mp_channel(ch, DenseOperator::diagonal(p)).real_diagonal(), p), 1e-15);
}

TEST(CoarsePovm, HalfHalfCompleteness) {
  const auto ch = coarse_povm(PartitionAssignment::parse("0,0,1,1"));
  EXPECT_EQ(ch.povm().size(), 4u);
  Matrix sum = Matrix::Zero(4, 4);
  for (const auto& e : ch.povm().elements()) sum += e.matrix();
  EXPECT_LT((sum - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MpChannel, ValidatesInputs) {
  const std::vector<double> part{0.9, 0.0};
  EXPECT_THROW(MPChannel(Povm({DenseOperator::diagonal(part)}), {DenseOperator::basis_projector(2, 0)}),
               InvalidArgument);
  EXPECT_THROW(MPChannel(Povm({DenseOperator::identity({2})}), {}), DimensionMismatch);
  const auto ch = coarse_povm(PartitionAssignment::parse("0,1,1"));
  EXPECT_THROW(apply_mp_channel(ch, random_density(2)), DimensionMismatch);
}

TEST(MpChannel, CoherentInputGivesEstimateOfDiagonal) {
  for (const auto* text : {"0,1,1", "0,0,1,2", "0,1,0,1,2"}) {
    const auto a = PartitionAssignment::parse(text);
    const auto rho = random_density(a.d());
    const auto out = apply_mp_channel(coarse_povm(a), rho);
    const auto est = estimate_from_state(DiagonalState(rho.real_diagonal()), a);
    EXPECT_LT(max_abs(out.real_diagonal(), est.state.probs().entries()), 1e-14);
    EXPECT_LT(out.max_off_diagonal(), 1e-15);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-14);
  }
}

TEST(Dilation, ReproducesCoarseChannel) {
  const auto ch = coarse_povm(PartitionAssignment::parse("0,1,1"));
  const auto dil = von_neumann_dilation(ch);
  EXPECT_TRUE(dil.unitary.is_unitary(1e-12));
  for (int trial = 0; trial < 3; ++trial) {
    const auto rho = random_density(3);
    EXPECT_LT(max_abs_difference(dil.apply(rho), apply_mp_channel(ch, rho)), 1e-12);
  }
}

TEST(Dilation, QubitComputationalMeasurementMatchesControlledFlip) {
  const auto ch = coarse_povm(PartitionAssignment::parse("0,1"));
  const auto dil = von_neumann_dilation(ch);
  const auto rho = random_density(2);
  const auto via_flip = partial_trace(conjugate(build_clone_unitary(2, 0), kron(rho, DenseOperator::basis_projector(2, 0))), {1});
  EXPECT_LT(max_abs_difference(dil.apply(rho), via_flip), 1e-12);
  EXPECT_LT(via_flip.max_off_diagonal(), 1e-15);
}

TEST(Dilation, TrivialChannelHasIdentityDilation) {
  const MPChannel ch(Povm({DenseOperator::identity({3})}), {DenseOperator::basis_projector(3, 0)});
  const auto dil = von_neumann_dilation(ch);
  EXPECT_LT((dil.unitary.matrix() - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Dilation, MixedMemoryWithinOrbit) {
  // Preparations that are permutations of the memory spectrum are reachable.
  const std::vector<double> nu{0.7, 0.2, 0.1};
  const std::vector<double> alt{0.2, 0.1, 0.7};
  const std::vector<double> half{0.0, 0.5, 0.5};
  const MPChannel ch(Povm({DenseOperator::basis_projector(3, 0), DenseOperator::diagonal(half), DenseOperator::diagonal(half)}),
                     {DenseOperator::diagonal(nu), DenseOperator::diagonal(alt), DenseOperator::diagonal(alt)});
  const auto dil = von_neumann_dilation(ch, DenseOperator::diagonal(nu));
  const auto rho = random_density(3);
  EXPECT_LT(max_abs_difference(dil.apply(rho), apply_mp_channel(ch, rho)), 1e-12);
}

TEST(Dilation, OrbitMismatchRejected) {
  const std::vector<double> mixed{0.5, 0.5};
  const MPChannel ch(Povm({DenseOperator::identity({2})}), {DenseOperator::diagonal(mixed)});
  EXPECT_THROW(von_neumann_dilation(ch), OrbitMismatch);
}

TEST(Pipeline, ThreeRoutesAgree) {
  for (std::size_t d = 2; d <= 5; ++d)
    for (std::size_t k = 2; k <= d; ++k)
      for (const auto& a : enumerate_assignments(d, k)) {
        if (a.setting().max_block() > k) continue;
        const auto p = random_probs(d);
        const auto rho = DenseOperator::diagonal(p);
        const auto analytic = estimate_from_state(DiagonalState(p), a).state.probs().entries();
        const auto dense = simulate_pipeline(rho, a);
        const auto channel = apply_mp_channel(coarse_povm(a), rho);
        EXPECT_LT(max_abs(dense.memory.real_diagonal(), analytic), 1e-12) << a.to_string();
        EXPECT_LT(max_abs(channel.real_diagonal(), analytic), 1e-12) << a.to_string();
        EXPECT_LT(dense.memory.max_off_diagonal(), 1e-12);
        EXPECT_LT(max_abs_difference(dense.system, rho), 1e-12);
      }
}
