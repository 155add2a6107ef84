#pragma once

// Estimate generation: spreading probe populations over a d-level memory.
//
// Three routes produce the same estimate and are cross-checked in tests:
//   analytic    estimate_from_probe(extract_probe(rho, a))
//   unitary     build_ie_unitary then build_eg_unitary on system ⊗ probe ⊗ memory
//   channel     apply_mp_channel(coarse_povm(a), rho)

#include <cstddef>
#include <vector>

#include "thermoknow/channels.hpp"
#include "thermoknow/extraction.hpp"
#include "thermoknow/linalg.hpp"
#include "thermoknow/settings.hpp"

namespace thermoknow {

/// Diagonal memory state; level j in block i holds pbar_i / t_i.
struct Estimate {
  DiagonalState state;
  PartitionAssignment source;
};

/// Measure-and-prepare channel: outcome i of the POVM prepares preps[i].
class MPChannel {
 public:
  MPChannel(Povm povm, std::vector<DenseOperator> preps);

  const Povm& povm() const { return povm_; }
  const std::vector<DenseOperator>& preps() const { return preps_; }
  std::size_t input_dimension() const { return povm_.dimension(); }
  std::size_t output_dimension() const { return preps_.front().side(); }

 private:
  Povm povm_;
  std::vector<DenseOperator> preps_;
};

Estimate estimate_from_probe(const ProbeState& sigma);
inline Estimate estimate_from_state(const DiagonalState& rho, const PartitionAssignment& a) {
  return estimate_from_probe(extract_probe(rho, a));
}

/// Swaps |i,0> -> |0, min P_i>, then a Fourier transform on span{|j, P_i[j]>}
/// for each block. Acts on probe ⊗ memory with the memory starting in |0>.
/// Throws ProbeTooSmall when a block is larger than the probe.
DenseOperator build_eg_unitary(const PartitionAssignment& a);

/// One element Pi_{P_i} / t_i per level l in P_i, preparing |l>.
MPChannel coarse_povm(const PartitionAssignment& a);

DenseOperator apply_mp_channel(const MPChannel& channel, const DenseOperator& rho);

/// Unitary dilation on input ⊗ outcome register ⊗ output memory.
struct Dilation {
  DenseOperator unitary;
  DenseOperator ancilla_init;  // on outcome register ⊗ output memory
  std::size_t input_dim = 0;
  std::size_t outcome_dim = 0;
  std::size_t output_dim = 0;

  /// tr_{input, outcome}[ V (rho ⊗ ancilla_init) V^dagger ]
  DenseOperator apply(const DenseOperator& rho) const;
};

/// `memory_init` must share its spectrum with every preparation (unitary orbit);
/// defaults to |0><0| on the output space.
Dilation von_neumann_dilation(const MPChannel& channel);
Dilation von_neumann_dilation(const MPChannel& channel, const DenseOperator& memory_init);

struct PipelineResult {
  DenseOperator system;  // marginal after both steps
  DenseOperator probe;
  DenseOperator memory;  // the estimate
};

/// Dense simulation of IE then EG on system ⊗ probe ⊗ memory.
PipelineResult simulate_pipeline(const DenseOperator& rho, const PartitionAssignment& a, std::size_t reset_level = 0);
/// Same, reusing prebuilt unitaries (IE on system ⊗ probe, EG on probe ⊗ memory).
PipelineResult simulate_pipeline(const DenseOperator& rho, const DenseOperator& ie, const DenseOperator& eg,
                                 const PartitionAssignment& a, std::size_t reset_level = 0);

}  // namespace thermoknow
