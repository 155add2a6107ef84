#include "thermoknow/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermoknow/error.hpp"

namespace thermoknow {

Hamiltonian::Hamiltonian(std::vector<double> energies) : e_(std::move(energies)) {
  if (e_.empty()) throw InvalidArgument("Hamiltonian needs at least one level");
  for (double e : e_)
    if (!std::isfinite(e)) throw InvalidArgument("Hamiltonian energies must be finite");
  if (!std::is_sorted(e_.begin(), e_.end())) throw InvalidArgument("Hamiltonian energies must be ascending");
}

Hamiltonian Hamiltonian::equidistant(std::size_t d, double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("equidistant spacing must be positive");
  std::vector<double> e(d);
  for (std::size_t i = 0; i < d; ++i) e[i] = spacing * static_cast<double>(i);
  return Hamiltonian(std::move(e));
}

double Hamiltonian::expectation(std::span<const double> populations) const {
  if (populations.size() != e_.size()) throw DimensionMismatch("energy expectation: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < e_.size(); ++i) acc += populations[i] * e_[i];
  return acc;
}

ProbeState::ProbeState(ProbabilityVector probs, PartitionAssignment source)
    : p_(std::move(probs)), source_(std::move(source)) {
  if (p_.size() != source_.k()) throw DimensionMismatch("probe state length must equal the probe dimension");
}

DiagonalState thermal_state(const Hamiltonian& h, double beta) {
  if (std::isnan(beta) || beta < 0.0) throw InvalidArgument("inverse temperature must be >= 0");
  const auto& e = h.energies();
  std::vector<double> w(e.size());
  if (std::isinf(beta)) {
    for (std::size_t i = 0; i < e.size(); ++i) w[i] = (e[i] == e.front()) ? 1.0 : 0.0;
  } else {
    for (std::size_t i = 0; i < e.size(); ++i) w[i] = std::exp(-beta * (e[i] - e.front()));
  }
  double z = 0.0;
  for (double x : w) z += x;
  for (double& x : w) x /= z;
  return DiagonalState(std::move(w));
}

DenseOperator two_level_swap(std::size_t d, std::size_t a, std::size_t b) {
  if (a >= d || b >= d) throw InvalidArgument("two_level_swap: level out of range");
  Matrix m = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  if (a != b) {
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    m(ia, ia) = 0.0;
    m(ib, ib) = 0.0;
    m(ia, ib) = 1.0;
    m(ib, ia) = 1.0;
  }
  return DenseOperator(std::move(m));
}

namespace {

// sum_i |i><i| ⊗ S_{r, target(i)}
DenseOperator controlled_swaps(std::size_t control_dim, std::size_t target_dim, std::size_t reset,
                               const std::vector<std::size_t>& target_of) {
  const auto cd = static_cast<Eigen::Index>(control_dim);
  const auto td = static_cast<Eigen::Index>(target_dim);
  Matrix u = Matrix::Zero(cd * td, cd * td);
  for (std::size_t i = 0; i < control_dim; ++i) {
    const Matrix s = two_level_swap(target_dim, reset, target_of[i]).matrix();
    const auto ii = static_cast<Eigen::Index>(i);
    u.block(ii * td, ii * td, td, td) = s;
  }
  return {{control_dim, target_dim}, std::move(u)};
}

}  // namespace

DenseOperator build_clone_unitary(std::size_t d, std::size_t q) {
  if (q >= d) throw InvalidArgument("clone unitary: reference level out of range");
  std::vector<std::size_t> target(d);
  for (std::size_t i = 0; i < d; ++i) target[i] = i;
  return controlled_swaps(d, d, q, target);
}

DenseOperator build_ie_unitary(const PartitionAssignment& a, std::size_t reset_level) {
  if (reset_level >= a.k()) throw InvalidArgument("IE unitary: probe reset level out of range");
  return controlled_swaps(a.d(), a.k(), reset_level, a.labels());
}

ProbeState extract_probe(const DiagonalState& rho, const PartitionAssignment& a) {
  if (rho.dimension() != a.d()) throw DimensionMismatch("extract_probe: state and assignment dimensions differ");
  std::vector<double> sums(a.k(), 0.0);
  for (std::size_t level = 0; level < a.d(); ++level) sums[a.label(level)] += rho[level];
  return {ProbabilityVector(std::move(sums)), a};
}

DenseOperator simulate_probe(const DenseOperator& rho, const PartitionAssignment& a, std::size_t reset_level) {
  if (rho.side() != a.d()) throw DimensionMismatch("simulate_probe: state and assignment dimensions differ");
  const DenseOperator joint = kron(rho, DenseOperator::basis_projector(a.k(), reset_level));
  return partial_trace(conjugate(build_ie_unitary(a, reset_level), joint), {1});
}

}  // namespace thermoknow
