#pragma once

// Post-processing of estimate sets: symmetrization and knowledge concentration.
//
// For m estimates the product state lives on d^m levels with the first estimate
// as subsystem 0. Dense routines refuse to build anything larger than dense_cap().

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "thermoknow/estimation.hpp"
#include "thermoknow/extraction.hpp"
#include "thermoknow/linalg.hpp"
#include "thermoknow/settings.hpp"

namespace thermoknow {

/// Default 4096; THERMOKNOW_DENSE_CAP overrides it.
std::size_t dense_cap();

class EstimateSet {
 public:
  explicit EstimateSet(std::vector<Estimate> estimates);

  std::size_t size() const { return estimates_.size(); }
  std::size_t d() const { return estimates_.front().state.dimension(); }
  const MeasurementSetting& setting() const { return setting_; }
  const Estimate& operator[](std::size_t i) const { return estimates_[i]; }
  const std::vector<Estimate>& estimates() const { return estimates_; }
  std::vector<ProbabilityVector> vectors() const;

 private:
  std::vector<Estimate> estimates_;
  MeasurementSetting setting_;
};

/// One estimate per canonical assignment of `setting`, in enumeration order.
EstimateSet all_estimates(const DiagonalState& rho, const MeasurementSetting& setting);

/// Arithmetic mean of the estimate vectors.
DiagonalState symmetrize(const EstimateSet& set);
DiagonalState symmetrize(std::span<const ProbabilityVector> estimates);

enum class ClosedFormKind { OneVsRest, HalfHalf, OneTwoThree };

/// The setting's closed-form family, if it has one.
std::optional<ClosedFormKind> closed_form_kind(const MeasurementSetting& setting);
DiagonalState symmetrized_closed_form(const DiagonalState& rho, ClosedFormKind kind);

/// Mean over all estimates of `setting`; uses the closed form when one applies.
DiagonalState symmetrized_estimate(const DiagonalState& rho, const MeasurementSetting& setting);

/// R_pi on (C^d)^{⊗m}: the factor in slot s moves to slot perm[s].
DenseOperator permutation_operator(std::span<const std::size_t> perm, std::size_t d);

/// (1/m!) sum_pi R_pi, the projector onto the symmetric subspace.
DenseOperator build_symmetrizer(std::size_t m, std::size_t d, std::size_t cap = dense_cap());

/// (1/m!) sum_pi R_pi op R_pi^dagger.
DenseOperator twirl(const DenseOperator& op, std::size_t m, std::size_t d, std::size_t cap = dense_cap());

/// Dense ⊗_i diag(estimates[i]).
DenseOperator product_operator(std::span<const ProbabilityVector> estimates, std::size_t cap = dense_cap());

/// First marginal of Pi omega Pi / tr(Pi omega Pi).
DenseOperator projected_first_marginal(std::span<const ProbabilityVector> estimates, std::size_t cap = dense_cap());
/// First marginal of the permutation twirl of omega.
DenseOperator twirled_first_marginal(std::span<const ProbabilityVector> estimates, std::size_t cap = dense_cap());

struct FidelityRow {
  MeasurementSetting setting;
  double beta = 0.0;
  double fidelity = 0.0;
};

/// Rows ordered by setting (lexicographic) then by beta (ascending).
std::vector<FidelityRow> fidelity_sweep(const Hamiltonian& h, std::vector<MeasurementSetting> settings,
                                        std::vector<double> betas);

/// Composite indices of the product basis ordered by descending population,
/// ties broken by ascending index.
std::vector<std::size_t> sorted_product_order(std::span<const ProbabilityVector> estimates);

/// Sorted products, summed in consecutive runs of d^{m-1}.
ProbabilityVector ordered_first_marginal(std::span<const ProbabilityVector> estimates);
ProbabilityVector ordered_first_marginal(const EstimateSet& set);

struct TransferMatrix {
  RealMatrix entries;
  std::optional<RealMatrix> witness;  // orthogonal, entries = witness^2 elementwise

  bool is_doubly_stochastic(double tol = kTolerance) const;
  bool certified_by_witness(double tol = kTolerance) const;
  std::vector<double> apply(std::span<const double> q) const;
};

/// Orthogonal U with diag(U diag(q) U^T) = p, built from at most d-1 Givens
/// rotations. Throws InfeasiblePlan unless q majorizes p.
TransferMatrix synthesize_orthostochastic(const ProbabilityVector& q, const ProbabilityVector& p);

struct ConcentrationPlan {
  DiagonalState target;
  ProbabilityVector ordered_marginal;
  bool feasible = false;
  std::optional<TransferMatrix> transfer;
  /// pre_permutation[r] is the product-basis index holding the r-th largest population.
  std::vector<std::size_t> pre_permutation;
  std::size_t copies = 0;
  std::size_t d = 0;
};

ConcentrationPlan plan_concentration(std::span<const ProbabilityVector> estimates, const DiagonalState& target);
ConcentrationPlan plan_concentration(const EstimateSet& set, const DiagonalState& target);

/// Subspace i = (i_1..i_{m-1}) holds |j, j+i_1, ..., j+i_{m-1}> (mod d) at position j.
std::vector<std::vector<std::size_t>> concentration_subspaces(std::size_t m, std::size_t d);

/// Direct sum of `block` over the concentration subspaces (acting on the first index).
DenseOperator block_unitary(const Matrix& block, std::size_t m, std::size_t d, std::size_t cap = dense_cap());

/// Block unitary of the witness after sorting the product basis.
DenseOperator assemble_concentration_unitary(const ConcentrationPlan& plan, std::size_t cap = dense_cap());

}  // namespace thermoknow
