#include "thermoknow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "thermoknow/estimation.hpp"
#include "thermoknow/manipulation.hpp"

namespace thermoknow {

namespace {

double max_gap(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

SuiteResult central_equivalence_suite(std::size_t max_d, double tolerance) {
  SuiteResult r{"central equivalence", 0.0, tolerance, 0};
  const double betas[] = {0.0, 0.5, 1.0, 3.0, 10.0};
  for (std::size_t d = 1; d <= max_d; ++d) {
    const auto h = Hamiltonian::equidistant(d);
    for (std::size_t k = 1; k <= d; ++k)
      for (const auto& a : enumerate_assignments(d, k)) {
        if (a.setting().max_block() > k) continue;
        const auto ie = build_ie_unitary(a);
        const auto eg = build_eg_unitary(a);
        const auto channel = coarse_povm(a);
        for (double beta : betas) {
          const auto rho = thermal_state(h, beta);
          const auto dense = simulate_pipeline(rho.to_operator(), ie, eg, a).memory;
          const auto mp = apply_mp_channel(channel, rho.to_operator());
          const auto analytic = estimate_from_state(rho, a).state.to_operator();
          r.residual = std::max({r.residual, max_abs_difference(dense, mp), max_abs_difference(dense, analytic),
                                 max_abs_difference(mp, analytic)});
          ++r.cases;
        }
      }
  }
  return r;
}

SuiteResult symmetrization_suite(std::size_t max_d, std::size_t max_m, double tolerance) {
  SuiteResult r{"symmetrization twirl", 0.0, tolerance, 0};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t d = 2; d <= max_d; ++d)
    for (std::size_t m = 2; m <= max_m; ++m) {
      std::vector<ProbabilityVector> est;
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> w(d);
        double total = 0.0;
        for (auto& x : w) total += (x = unit(rng));
        for (auto& x : w) x /= total;
        est.emplace_back(std::move(w));
      }
      const auto mean = symmetrize(est);
      const auto marginal = twirled_first_marginal(est);
      r.residual = std::max({r.residual, max_gap(marginal.real_diagonal(), mean.probs().entries()),
                             marginal.max_off_diagonal()});
      ++r.cases;
    }
  return r;
}

SuiteResult concentration_suite(double tolerance) {
  SuiteResult r{"qutrit concentration", 0.0, tolerance, 1};
  const DiagonalState rho(std::vector<double>{1.0 / 2, 1.0 / 3, 1.0 / 6});
  const auto set = all_estimates(rho, MeasurementSetting::one_vs_rest(3));
  const auto vectors = set.vectors();
  const auto plan = plan_concentration(set, rho);
  if (!plan.feasible) {
    r.residual = 1.0;
    return r;
  }
  const auto v = assemble_concentration_unitary(plan);
  const auto marginal = partial_trace(conjugate(v, product_operator(vectors)), {0});
  r.residual = std::max(max_gap(marginal.real_diagonal(), rho.probs().entries()), marginal.max_off_diagonal());
  return r;
}

std::vector<SuiteResult> run_verification(VerifyLevel level, std::optional<double> tolerance) {
  const bool full = level == VerifyLevel::Full;
  std::vector<SuiteResult> out{central_equivalence_suite(full ? 6 : 4, 1e-12),
                               symmetrization_suite(full ? 6 : 4, full ? 3 : 2, 1e-12),
                               concentration_suite(1e-10)};
  if (tolerance)
    for (auto& s : out) s.tolerance = *tolerance;
  return out;
}

}  // namespace thermoknow
