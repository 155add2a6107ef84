#pragma once

// Dense complex linear algebra and information-theoretic primitives.
//
// Every operator carries the list of subsystem dimensions it acts on so that
// partial traces and tensor products can be checked against the layout.
// Subsystem 0 is the most significant digit of the composite index.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace thermoknow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kTolerance = 1e-10;
inline constexpr double kDensityTolerance = 1e-12;

/// Normalized, non-negative real vector. Entries in [-1e-12, 0) are clipped to 0.
class ProbabilityVector {
 public:
  ProbabilityVector() = default;
  explicit ProbabilityVector(std::vector<double> entries, double tol = kDensityTolerance);

  static ProbabilityVector uniform(std::size_t n);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& entries() const { return p_; }
  auto begin() const { return p_.begin(); }
  auto end() const { return p_.end(); }

  std::vector<double> sorted_descending() const;

 private:
  std::vector<double> p_;
};

class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(std::vector<std::size_t> dims, Matrix entries);
  explicit DenseOperator(Matrix entries);

  static DenseOperator identity(std::vector<std::size_t> dims);
  static DenseOperator diagonal(std::span<const double> values);
  static DenseOperator diagonal(const ProbabilityVector& p) { return diagonal(std::span(p.entries())); }
  /// |level><level| on a d-dimensional space.
  static DenseOperator basis_projector(std::size_t d, std::size_t level);

  const Matrix& matrix() const { return m_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t side() const { return static_cast<std::size_t>(m_.rows()); }
  Complex operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  DenseOperator adjoint() const { return {dims_, m_.adjoint()}; }
  Complex trace() const { return m_.trace(); }

  bool is_hermitian(double tol = kDensityTolerance) const;
  bool is_unitary(double tol = kDensityTolerance) const;
  bool is_density(double tol = kDensityTolerance) const;

  std::vector<double> real_diagonal() const;
  double max_off_diagonal() const;

 private:
  std::vector<std::size_t> dims_;
  Matrix m_;
};

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
DenseOperator kron(const DenseOperator& a, const DenseOperator& b);
/// u * rho * u^dagger
DenseOperator conjugate(const DenseOperator& u, const DenseOperator& rho);
double max_abs_difference(const DenseOperator& a, const DenseOperator& b);

/// Reduced operator on the subsystems listed in `keep` (kept in their original order).
DenseOperator partial_trace(const DenseOperator& op, std::span<const std::size_t> keep);
inline DenseOperator partial_trace(const DenseOperator& op, std::initializer_list<std::size_t> keep) {
  return partial_trace(op, std::span(keep.begin(), keep.size()));
}

/// Ascending eigenvalues of a Hermitian operator.
std::vector<double> hermitian_eigenvalues(const DenseOperator& op);
/// Eigenvalues clipped at zero and renormalized to unit sum.
std::vector<double> density_spectrum(const DenseOperator& rho);
/// Principal square root of a positive semidefinite operator.
Matrix psd_sqrt(const Matrix& m);

double fidelity(const DenseOperator& rho, const DenseOperator& sigma);
double von_neumann_entropy(const DenseOperator& rho);
double shannon_entropy(std::span<const double> p);
inline double shannon_entropy(const ProbabilityVector& p) { return shannon_entropy(std::span(p.entries())); }

/// D(rho || sigma) in nats; +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const DenseOperator& rho, const DenseOperator& sigma);
inline bool is_divergent(double value) { return value == std::numeric_limits<double>::infinity(); }

struct Bipartition {
  std::vector<std::size_t> first;  // subsystem indices of part A; B is the rest
};
double mutual_information(const DenseOperator& joint, const Bipartition& split);

/// True iff q majorizes p: descending partial sums of q dominate those of p, totals equal.
bool majorizes(std::span<const double> q, std::span<const double> p, double tol = kTolerance);
inline bool majorizes(const ProbabilityVector& q, const ProbabilityVector& p, double tol = kTolerance) {
  return majorizes(std::span(q.entries()), std::span(p.entries()), tol);
}

/// Indices ordering `values` descending; ties keep ascending original index.
std::vector<std::size_t> descending_order(std::span<const double> values);

std::size_t checked_product(std::span<const std::size_t> dims);

}  // namespace thermoknow
