#include "thermoknow/channels.hpp"

#include <algorithm>
#include <cmath>

#include "thermoknow/error.hpp"

namespace thermoknow {

Povm::Povm(std::vector<DenseOperator> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidArgument("POVM needs at least one element");
  for (const auto& e : elements_)
    if (e.side() != elements_.front().side()) throw DimensionMismatch("POVM elements differ in dimension");
}

PovmReport validate_povm(const Povm& povm, double tol) {
  const auto d = static_cast<Eigen::Index>(povm.dimension());
  Matrix sum = Matrix::Zero(d, d);
  PovmReport report;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  bool hermitian = true;
  for (const auto& e : povm.elements()) {
    sum += e.matrix();
    hermitian = hermitian && e.is_hermitian(tol);
    report.min_eigenvalue = std::min(report.min_eigenvalue, hermitian_eigenvalues(e).front());
  }
  const DenseOperator defect(Matrix(Matrix::Identity(d, d) - sum));
  double norm = 0.0;
  for (double x : hermitian_eigenvalues(defect)) norm += std::abs(x);
  report.completeness_defect = norm;
  report.ok = hermitian && norm <= tol && report.min_eigenvalue >= -tol;
  return report;
}

ProbabilityVector measurement_statistics(const Povm& povm, const DenseOperator& rho) {
  if (rho.side() != povm.dimension()) throw DimensionMismatch("measurement_statistics: dimension mismatch");
  std::vector<double> p;
  p.reserve(povm.size());
  for (const auto& e : povm.elements()) p.push_back((e.matrix() * rho.matrix()).trace().real());
  return ProbabilityVector(std::move(p));
}

bool is_projective(const Povm& povm, double tol) {
  for (const auto& e : povm.elements()) {
    if (!e.is_hermitian(tol)) return false;
    if ((e.matrix() * e.matrix() - e.matrix()).cwiseAbs().maxCoeff() > tol) return false;
  }
  return validate_povm(povm, tol).ok;
}

DenseOperator luders_update(const Povm& projective, const DenseOperator& rho) {
  if (rho.side() != projective.dimension()) throw DimensionMismatch("luders_update: dimension mismatch");
  if (!is_projective(projective)) throw InvalidArgument("luders_update: elements must be orthogonal projectors");
  Matrix out = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& p : projective.elements()) out += p.matrix() * rho.matrix() * p.matrix();
  return {rho.dims(), std::move(out)};
}

}  // namespace thermoknow
