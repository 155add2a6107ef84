#pragma once

// Cross-path equivalence suites behind `thermoknow verify`.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace thermoknow {

enum class VerifyLevel { Quick, Full };

struct SuiteResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  bool passed() const { return residual <= tolerance; }
};

/// Max pairwise gap between the dense pipeline, the measure-and-prepare channel
/// and the analytic estimate over every assignment with max block <= k, d <= max_d.
SuiteResult central_equivalence_suite(std::size_t max_d, double tolerance);

/// Permutation-twirl marginal against the arithmetic mean of m random diagonal
/// estimates, for (d, m) pairs with d^m small enough to build densely.
SuiteResult symmetrization_suite(std::size_t max_d, std::size_t max_m, double tolerance);

/// Qutrit with three one-vs-rest estimates: assembled concentration unitary
/// returns the true state in the first marginal.
SuiteResult concentration_suite(double tolerance);

/// quick: d <= 4, m <= 2. full: d <= 6, m <= 3.
/// A tolerance override replaces every suite tolerance (used to exercise the failure path).
std::vector<SuiteResult> run_verification(VerifyLevel level, std::optional<double> tolerance = std::nullopt);

}  // namespace thermoknow
