#pragma once

// Information extraction: coupling a d-level system to a k-level probe.
//
// Tensor ordering is fixed in one place:
//   information extraction acts on  system (d) ⊗ probe (k)
//   estimate generation acts on     probe (k)  ⊗ memory (d)
//   the full pipeline is            system ⊗ probe ⊗ memory

#include <cstddef>
#include <vector>

#include "thermoknow/linalg.hpp"
#include "thermoknow/settings.hpp"

namespace thermoknow {

class Hamiltonian {
 public:
  explicit Hamiltonian(std::vector<double> energies);
  static Hamiltonian equidistant(std::size_t d, double spacing = 1.0);

  std::size_t dimension() const { return e_.size(); }
  const std::vector<double>& energies() const { return e_; }
  double operator[](std::size_t i) const { return e_[i]; }
  double expectation(std::span<const double> populations) const;

 private:
  std::vector<double> e_;
};

class DiagonalState {
 public:
  explicit DiagonalState(ProbabilityVector probs) : p_(std::move(probs)) {}
  explicit DiagonalState(std::vector<double> probs) : p_(std::move(probs)) {}

  const ProbabilityVector& probs() const { return p_; }
  std::size_t dimension() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  DenseOperator to_operator() const { return DenseOperator::diagonal(p_); }

 private:
  ProbabilityVector p_;
};

/// Probe populations together with the coupling that produced them.
class ProbeState {
 public:
  ProbeState(ProbabilityVector probs, PartitionAssignment source);

  const ProbabilityVector& probs() const { return p_; }
  const PartitionAssignment& source() const { return source_; }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  ProbabilityVector p_;
  PartitionAssignment source_;
};

/// Gibbs populations exp(-beta e_i)/Z. beta = +infinity gives the ground manifold.
DiagonalState thermal_state(const Hamiltonian& h, double beta);

/// Two-level transposition of basis states a and b on a d-level space (identity when a == b).
DenseOperator two_level_swap(std::size_t d, std::size_t a, std::size_t b);

/// V = sum_i |i><i| ⊗ S_{q,i} on system ⊗ memory; copies a diagonal state into |q>.
DenseOperator build_clone_unitary(std::size_t d, std::size_t q);

/// U_IE = sum_j sum_{i in P_j} |i><i| ⊗ S_{r,j} on system ⊗ probe.
DenseOperator build_ie_unitary(const PartitionAssignment& a, std::size_t reset_level = 0);

/// Block sums of the populations; no matrices involved.
ProbeState extract_probe(const DiagonalState& rho, const PartitionAssignment& a);

/// Probe marginal of U_IE (rho ⊗ |r><r|) U_IE^dagger.
DenseOperator simulate_probe(const DenseOperator& rho, const PartitionAssignment& a, std::size_t reset_level = 0);

}  // namespace thermoknow
