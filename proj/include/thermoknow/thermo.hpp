#pragma once

// Entropy production of the two protocol steps, ergotropy, and work extraction
// from a pair of thermal systems using estimated populations.
// Entropies are in nats.

#include <cstddef>
#include <span>
#include <vector>

#include "thermoknow/estimation.hpp"
#include "thermoknow/extraction.hpp"
#include "thermoknow/linalg.hpp"
#include "thermoknow/settings.hpp"

namespace thermoknow {

struct EntropyReport {
  double sigma_total = 0.0;  // +infinity when the relative entropy diverges
  double mutual_info = 0.0;
  double rel_entropy = 0.0;
  double delta_s_system = 0.0;  // S(system') - S(system)
  bool divergent = false;
};

/// Sigma = I(S':R') + D(rho'_R || rho_R) for u acting on system ⊗ reservoir.
EntropyReport entropy_production(const DenseOperator& u, const DenseOperator& system_init,
                                 const DenseOperator& reservoir_init);

/// Shannon entropy of the probe populations.
double ie_dissipation(const DiagonalState& rho, const PartitionAssignment& a);

/// Dense entropy production of the IE step: the probe (reset to |r>) is the
/// system and the unknown state is the reservoir.
EntropyReport ie_entropy_production(const DenseOperator& rho, const PartitionAssignment& a, std::size_t reset_level = 0);

class MemoryNoise {
 public:
  explicit MemoryNoise(double epsilon);
  double epsilon() const { return eps_; }
  /// (1-eps)|0><0| + (eps/d) identity.
  DenseOperator memory_state(std::size_t d) const;

 private:
  double eps_;
};

/// dS_P' + (pbar_0/t_0) log[(1-eps)(eps/d)^((t_0-1)/t_0)] - (1-pbar_0) log(eps/d),
/// with block 0 taken from the estimate's source assignment.
double eg_dissipation_closed_form(const Estimate& omega, const MemoryNoise& noise, double delta_s_probe);

/// Dense entropy production of the EG step: the probe in state sigma is the
/// system, the noisy memory is the reservoir.
EntropyReport eg_entropy_production(const ProbeState& sigma, const MemoryNoise& noise);

/// level_map[i] is the level that population i is moved to.
struct ExtractionPlan {
  std::vector<std::size_t> level_map;
  std::vector<double> source_populations;
};

/// Populations descending onto energies ascending; ties broken by index.
ExtractionPlan passive_plan(std::span<const double> populations, std::span<const double> energies);

/// Energy released by applying `plan` to `populations`.
double extracted_work(std::span<const double> populations, std::span<const double> energies,
                      const ExtractionPlan& plan);

double ergotropy(std::span<const double> populations, std::span<const double> energies);
inline double ergotropy(const DiagonalState& rho, const Hamiltonian& h) {
  return ergotropy(std::span(rho.probs().entries()), std::span(h.energies()));
}

/// Energies of H_c ⊗ 1 + 1 ⊗ H_h in product-basis order.
std::vector<double> composite_energies(const Hamiltonian& h_c, const Hamiltonian& h_h);
std::vector<double> product_populations(const DiagonalState& a, const DiagonalState& b);

struct ExtractionRecord {
  double e_true = 0.0;
  double e_symmetrized = 0.0;
  double e_single = 0.0;
};

/// Ergotropy of the true product state against the work obtained with the
/// passive permutation of the symmetrized estimate and of a single estimate
/// (first canonical assignment of `setting`).
ExtractionRecord extraction_protocol(double beta_c, double beta_h, const Hamiltonian& h_c, const Hamiltonian& h_h,
                                     const MeasurementSetting& setting);

}  // namespace thermoknow
