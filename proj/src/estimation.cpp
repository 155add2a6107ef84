#include "thermoknow/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "thermoknow/error.hpp"

namespace thermoknow {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Extends an injective partial map on {0..n-1} to a permutation. Each open chain
// s -> f(s) -> ... -> e is closed with e -> s, so disjoint moves become transpositions.
std::vector<std::size_t> complete_permutation(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& moves) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> f(n, unset);
  std::vector<bool> is_image(n, false);
  for (auto [src, dst] : moves) {
    f[src] = dst;
    is_image[dst] = true;
  }
  for (auto [src, dst] : moves) {
    if (is_image[src]) continue;  // not a chain start
    std::size_t x = src;
    while (f[x] != unset) x = f[x];
    f[x] = src;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (f[i] == unset) f[i] = i;
  return f;
}

}  // namespace

MPChannel::MPChannel(Povm povm, std::vector<DenseOperator> preps) : povm_(std::move(povm)), preps_(std::move(preps)) {
  if (preps_.size() != povm_.size()) throw DimensionMismatch("MP channel needs one preparation per POVM element");
  const auto report = validate_povm(povm_);
  if (!report.ok)
    throw InvalidArgument("MP channel POVM invalid (completeness defect " + std::to_string(report.completeness_defect) +
                          ", min eigenvalue " + std::to_string(report.min_eigenvalue) + ")");
  for (const auto& p : preps_) {
    if (p.side() != preps_.front().side()) throw DimensionMismatch("MP channel preparations differ in dimension");
    if (!p.is_density()) throw InvalidArgument("MP channel preparation is not a density matrix");
  }
}

Estimate estimate_from_probe(const ProbeState& sigma) {
  const auto& a = sigma.source();
  const auto t = a.block_sizes();
  std::vector<double> w(a.d());
  for (std::size_t level = 0; level < a.d(); ++level) {
    const auto block = a.label(level);
    w[level] = sigma[block] / static_cast<double>(t[block]);
  }
  return {DiagonalState(std::move(w)), a};
}

DenseOperator build_eg_unitary(const PartitionAssignment& a) {
  const std::size_t k = a.k();
  const std::size_t d = a.d();
  const auto blocks = a.blocks();
  for (const auto& b : blocks)
    if (b.size() > k)
      throw ProbeTooSmall("probe too small for unitary path: block of size " + std::to_string(b.size()) +
                          " exceeds probe dimension " + std::to_string(k));

  const std::size_t n = k * d;
  const auto at = [d](std::size_t probe, std::size_t memory) { return probe * d + memory; };

  std::vector<std::pair<std::size_t, std::size_t>> moves;
  for (std::size_t i = 0; i < k; ++i) moves.emplace_back(at(i, 0), at(0, blocks[i].front()));
  const auto perm = complete_permutation(n, moves);
  Matrix swaps = Matrix::Zero(idx(n), idx(n));
  for (std::size_t x = 0; x < n; ++x) swaps(idx(perm[x]), idx(x)) = 1.0;

  Matrix fourier = Matrix::Identity(idx(n), idx(n));
  for (const auto& levels : blocks) {
    const std::size_t t = levels.size();
    if (t == 1) continue;
    const double norm = 1.0 / std::sqrt(static_cast<double>(t));
    for (std::size_t j = 0; j < t; ++j)
      for (std::size_t l = 0; l < t; ++l) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(j * l) / static_cast<double>(t);
        fourier(idx(at(j, levels[j])), idx(at(l, levels[l]))) = std::polar(norm, phase);
      }
  }
  return {{k, d}, fourier * swaps};
}

MPChannel coarse_povm(const PartitionAssignment& a) {
  const std::size_t d = a.d();
  std::vector<DenseOperator> elements;
  std::vector<DenseOperator> preps;
  for (const auto& levels : a.blocks()) {
    std::vector<double> diag(d, 0.0);
    for (std::size_t l : levels) diag[l] = 1.0 / static_cast<double>(levels.size());
    for (std::size_t l : levels) {
      elements.push_back(DenseOperator::diagonal(std::span<const double>(diag)));
      preps.push_back(DenseOperator::basis_projector(d, l));
    }
  }
  return {Povm(std::move(elements)), std::move(preps)};
}

DenseOperator apply_mp_channel(const MPChannel& channel, const DenseOperator& rho) {
  if (rho.side() != channel.input_dimension()) throw DimensionMismatch("apply_mp_channel: input dimension mismatch");
  const auto dout = idx(channel.output_dimension());
  Matrix out = Matrix::Zero(dout, dout);
  const auto& elements = channel.povm().elements();
  for (std::size_t i = 0; i < elements.size(); ++i)
    out += (elements[i].matrix() * rho.matrix()).trace() * channel.preps()[i].matrix();
  return DenseOperator(std::move(out));
}

DenseOperator Dilation::apply(const DenseOperator& rho) const {
  if (rho.side() != input_dim) throw DimensionMismatch("dilation: input dimension mismatch");
  const DenseOperator in(std::vector<std::size_t>{input_dim}, rho.matrix());
  const DenseOperator joint = kron(in, ancilla_init);
  return partial_trace(conjugate(unitary, joint), {2});
}

Dilation von_neumann_dilation(const MPChannel& channel) {
  return von_neumann_dilation(channel, DenseOperator::basis_projector(channel.output_dimension(), 0));
}

Dilation von_neumann_dilation(const MPChannel& channel, const DenseOperator& memory_init) {
  const std::size_t din = channel.input_dimension();
  const std::size_t nout = channel.povm().size();
  const std::size_t dout = channel.output_dimension();
  if (memory_init.side() != dout || !memory_init.is_density())
    throw InvalidArgument("dilation: memory initial state must be a density matrix on the output space");

  // Measurement isometry |s> -> sum_i sqrt(M_i)|s> ⊗ |i>, completed to a unitary on input ⊗ outcome.
  const auto rows = idx(din * nout);
  Matrix iso = Matrix::Zero(rows, idx(din));
  for (std::size_t i = 0; i < nout; ++i) {
    const Matrix root = psd_sqrt(channel.povm().elements()[i].matrix());
    for (std::size_t s = 0; s < din; ++s)
      for (std::size_t c = 0; c < din; ++c) iso(idx(s * nout + i), idx(c)) = root(idx(s), idx(c));
  }
  Eigen::HouseholderQR<Matrix> qr(iso);
  const Matrix q = qr.householderQ();
  Matrix measure(rows, rows);
  std::size_t spare = din;
  for (std::size_t col = 0; col < din * nout; ++col) {
    if (col % nout == 0)
      measure.col(idx(col)) = iso.col(idx(col / nout));
    else
      measure.col(idx(col)) = q.col(idx(spare++));
  }

  // Preparation unitaries W_i with W_i nu W_i^dagger = prep_i.
  Eigen::SelfAdjointEigenSolver<Matrix> init_eig(memory_init.matrix());
  std::vector<Matrix> prepare;
  for (const auto& prep : channel.preps()) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(prep.matrix());
    if ((eig.eigenvalues() - init_eig.eigenvalues()).cwiseAbs().maxCoeff() > kTolerance)
      throw OrbitMismatch("dilation: preparation is not in the unitary orbit of the memory initial state");
    prepare.push_back(eig.eigenvectors() * init_eig.eigenvectors().adjoint());
  }

  const auto side = idx(din * nout * dout);
  Matrix control = Matrix::Zero(side, side);
  for (std::size_t s = 0; s < din; ++s)
    for (std::size_t i = 0; i < nout; ++i) {
      const auto base = idx((s * nout + i) * dout);
      control.block(base, base, idx(dout), idx(dout)) = prepare[i];
    }

  DenseOperator lifted = kron(DenseOperator({din, nout}, measure), DenseOperator::identity({dout}));
  Dilation out{DenseOperator({din, nout, dout}, control * lifted.matrix()),
               kron(DenseOperator::basis_projector(nout, 0), DenseOperator({dout}, memory_init.matrix())), din, nout,
               dout};
  return out;
}

PipelineResult simulate_pipeline(const DenseOperator& rho, const PartitionAssignment& a, std::size_t reset_level) {
  return simulate_pipeline(rho, build_ie_unitary(a, reset_level), build_eg_unitary(a), a, reset_level);
}

PipelineResult simulate_pipeline(const DenseOperator& rho, const DenseOperator& ie, const DenseOperator& eg,
                                 const PartitionAssignment& a, std::size_t reset_level) {
  const std::size_t d = a.d();
  const std::size_t k = a.k();
  if (rho.side() != d) throw DimensionMismatch("simulate_pipeline: state and assignment dimensions differ");
  const DenseOperator system(std::vector<std::size_t>{d}, rho.matrix());
  const DenseOperator joint =
      kron(kron(system, DenseOperator::basis_projector(k, reset_level)), DenseOperator::basis_projector(d, 0));
  const DenseOperator step1 = kron(ie, DenseOperator::identity({d}));
  const DenseOperator step2 = kron(DenseOperator::identity({d}), eg);
  const DenseOperator total(joint.dims(), step2.matrix() * step1.matrix());
  const DenseOperator final_state = conjugate(total, joint);
  return {partial_trace(final_state, {0}), partial_trace(final_state, {1}), partial_trace(final_state, {2})};
}

}  // namespace thermoknow
