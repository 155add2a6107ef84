#pragma once

// POVMs: validation, Born-rule statistics and the Lüders update.

#include <cstddef>
#include <vector>

#include "thermoknow/linalg.hpp"

namespace thermoknow {

class Povm {
 public:
  /// Elements must share one dimension; validity is checked by validate_povm, not here.
  explicit Povm(std::vector<DenseOperator> elements);

  const std::vector<DenseOperator>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::size_t dimension() const { return elements_.front().side(); }

 private:
  std::vector<DenseOperator> elements_;
};

struct PovmReport {
  bool ok = false;
  double completeness_defect = 0.0;  // trace norm of (identity - sum of elements)
  double min_eigenvalue = 0.0;       // most negative eigenvalue over all elements
};

PovmReport validate_povm(const Povm& povm, double tol = kDensityTolerance);

/// tr(M_i rho) for every element.
ProbabilityVector measurement_statistics(const Povm& povm, const DenseOperator& rho);

/// sum_i P_i rho P_i. Elements must be orthogonal projectors.
DenseOperator luders_update(const Povm& projective, const DenseOperator& rho);

bool is_projective(const Povm& povm, double tol = kDensityTolerance);

}  // namespace thermoknow
