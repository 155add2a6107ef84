#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "thermoknow/linalg.hpp"

namespace thermoknow::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline std::vector<double> random_probs(std::size_t n) {
  std::exponential_distribution<double> dist(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) total += (x = dist(rng()));
  for (double& x : p) x /= total;
  return p;
}

inline Matrix random_complex(std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = Complex(g(rng()), g(rng()));
  return m;
}

// Haar-ish unitary from the QR of a Gaussian matrix.
inline Matrix random_unitary(std::size_t n) {
  Eigen::HouseholderQR<Matrix> qr(random_complex(n));
  return qr.householderQ();
}

inline DenseOperator random_density(std::size_t n) {
  const Matrix g = random_complex(n);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DenseOperator(rho);
}

inline double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace thermoknow::testing
