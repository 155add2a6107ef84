#include "thermoknow/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "thermoknow/error.hpp"
#include "thermoknow/manipulation.hpp"

namespace thermoknow {

EntropyReport entropy_production(const DenseOperator& u, const DenseOperator& system_init,
                                 const DenseOperator& reservoir_init) {
  if (!system_init.is_density() || !reservoir_init.is_density())
    throw InvalidArgument("entropy_production: initial states must be density matrices");
  const DenseOperator s(std::vector<std::size_t>{system_init.side()}, system_init.matrix());
  const DenseOperator r(std::vector<std::size_t>{reservoir_init.side()}, reservoir_init.matrix());
  const DenseOperator joint = kron(s, r);
  if (u.side() != joint.side()) throw DimensionMismatch("entropy_production: unitary does not act on system ⊗ reservoir");
  if (!u.is_unitary(kTolerance)) throw InvalidArgument("entropy_production: operator is not unitary");

  const DenseOperator final_state = conjugate(DenseOperator(joint.dims(), u.matrix()), joint);
  EntropyReport report;
  report.mutual_info = mutual_information(final_state, Bipartition{{0}});
  report.rel_entropy = relative_entropy(partial_trace(final_state, {1}), r);
  report.delta_s_system = von_neumann_entropy(partial_trace(final_state, {0})) - von_neumann_entropy(s);
  report.divergent = is_divergent(report.rel_entropy);
  report.sigma_total = report.divergent ? std::numeric_limits<double>::infinity()
                                        : report.mutual_info + report.rel_entropy;
  return report;
}

double ie_dissipation(const DiagonalState& rho, const PartitionAssignment& a) {
  return shannon_entropy(extract_probe(rho, a).probs());
}

EntropyReport ie_entropy_production(const DenseOperator& rho, const PartitionAssignment& a, std::size_t reset_level) {
  // U_IE is built on state ⊗ probe; conjugating by the swap puts the probe first.
  const std::size_t d = a.d();
  const std::size_t k = a.k();
  const DenseOperator u = build_ie_unitary(a, reset_level);
  Matrix swap = Matrix::Zero(static_cast<Eigen::Index>(d * k), static_cast<Eigen::Index>(d * k));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < k; ++j)
      swap(static_cast<Eigen::Index>(j * d + i), static_cast<Eigen::Index>(i * k + j)) = 1.0;
  const DenseOperator probe_first({k, d}, swap * u.matrix() * swap.adjoint());
  return entropy_production(probe_first, DenseOperator::basis_projector(k, reset_level), rho);
}

MemoryNoise::MemoryNoise(double epsilon) : eps_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("memory noise epsilon must lie in (0, 1)");
}

DenseOperator MemoryNoise::memory_state(std::size_t d) const {
  std::vector<double> w(d, eps_ / static_cast<double>(d));
  w[0] += 1.0 - eps_;
  return DenseOperator::diagonal(std::span<const double>(w));
}

double eg_dissipation_closed_form(const Estimate& omega, const MemoryNoise& noise, double delta_s_probe) {
  const auto& a = omega.source;
  const double d = static_cast<double>(a.d());
  const double t0 = static_cast<double>(a.block_sizes().front());
  const auto blocks = a.blocks();
  double p0 = 0.0;
  for (std::size_t level : blocks.front()) p0 += omega.state[level];
  const double eps = noise.epsilon();
  return delta_s_probe + (p0 / t0) * std::log((1.0 - eps) * std::pow(eps / d, (t0 - 1.0) / t0)) -
         (1.0 - p0) * std::log(eps / d);
}

EntropyReport eg_entropy_production(const ProbeState& sigma, const MemoryNoise& noise) {
  const auto& a = sigma.source();
  return entropy_production(build_eg_unitary(a), DenseOperator::diagonal(sigma.probs()), noise.memory_state(a.d()));
}

ExtractionPlan passive_plan(std::span<const double> populations, std::span<const double> energies) {
  if (populations.size() != energies.size()) throw DimensionMismatch("passive_plan: length mismatch");
  const auto by_population = descending_order(populations);
  std::vector<std::size_t> by_energy(energies.size());
  std::iota(by_energy.begin(), by_energy.end(), 0);
  std::stable_sort(by_energy.begin(), by_energy.end(),
                   [&](std::size_t x, std::size_t y) { return energies[x] < energies[y]; });
  ExtractionPlan plan{std::vector<std::size_t>(populations.size()), {populations.begin(), populations.end()}};
  for (std::size_t r = 0; r < populations.size(); ++r) plan.level_map[by_population[r]] = by_energy[r];
  return plan;
}

double extracted_work(std::span<const double> populations, std::span<const double> energies,
                      const ExtractionPlan& plan) {
  if (populations.size() != energies.size() || plan.level_map.size() != energies.size())
    throw DimensionMismatch("extracted_work: length mismatch");
  double before = 0.0;
  double after = 0.0;
  for (std::size_t i = 0; i < populations.size(); ++i) {
    before += populations[i] * energies[i];
    after += populations[i] * energies[plan.level_map[i]];
  }
  return before - after;
}

double ergotropy(std::span<const double> populations, std::span<const double> energies) {
  return std::max(0.0, extracted_work(populations, energies, passive_plan(populations, energies)));
}

std::vector<double> composite_energies(const Hamiltonian& h_c, const Hamiltonian& h_h) {
  std::vector<double> e;
  e.reserve(h_c.dimension() * h_h.dimension());
  for (double a : h_c.energies())
    for (double b : h_h.energies()) e.push_back(a + b);
  return e;
}

std::vector<double> product_populations(const DiagonalState& a, const DiagonalState& b) {
  std::vector<double> p;
  p.reserve(a.dimension() * b.dimension());
  for (double x : a.probs())
    for (double y : b.probs()) p.push_back(x * y);
  return p;
}

ExtractionRecord extraction_protocol(double beta_c, double beta_h, const Hamiltonian& h_c, const Hamiltonian& h_h,
                                     const MeasurementSetting& setting) {
  if (setting.d() != h_c.dimension() || setting.d() != h_h.dimension())
    throw DimensionMismatch("extraction_protocol: setting and Hamiltonian dimensions differ");
  const DiagonalState rho_c = thermal_state(h_c, beta_c);
  const DiagonalState rho_h = thermal_state(h_h, beta_h);
  const auto energies = composite_energies(h_c, h_h);
  const auto truth = product_populations(rho_c, rho_h);

  const auto sym = product_populations(symmetrized_estimate(rho_c, setting), symmetrized_estimate(rho_h, setting));
  const auto first = enumerate_for_setting(setting).front();
  const auto single =
      product_populations(estimate_from_state(rho_c, first).state, estimate_from_state(rho_h, first).state);

  return {ergotropy(truth, energies), extracted_work(truth, energies, passive_plan(sym, energies)),
          extracted_work(truth, energies, passive_plan(single, energies))};
}

}  // namespace thermoknow
