#include "thermoknow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "thermoknow/error.hpp"

namespace thermoknow {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) strides[i - 1] = strides[i] * dims[i];
  return strides;
}

// Offsets into the composite index for every multi-index over `subsystems`.
std::vector<std::size_t> offsets_for(const std::vector<std::size_t>& dims,
                                     const std::vector<std::size_t>& strides,
                                     const std::vector<std::size_t>& subsystems) {
  std::vector<std::size_t> offsets{0};
  for (std::size_t s : subsystems) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[s]);
    for (std::size_t base : offsets)
      for (std::size_t v = 0; v < dims[s]; ++v) next.push_back(base + v * strides[s]);
    offsets = std::move(next);
  }
  return offsets;
}

void require_density(const DenseOperator& rho, const char* what) {
  if (!rho.is_density()) throw InvalidArgument(std::string(what) + ": input is not a density matrix");
}

}  // namespace

std::size_t checked_product(std::span<const std::size_t> dims) {
  std::size_t side = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw InvalidArgument("subsystem dimension must be positive");
    if (side > std::numeric_limits<std::size_t>::max() / d) throw InvalidArgument("dimension overflow");
    side *= d;
  }
  return side;
}

// --- ProbabilityVector -------------------------------------------------------

ProbabilityVector::ProbabilityVector(std::vector<double> entries, double tol) : p_(std::move(entries)) {
  if (p_.empty()) throw InvalidArgument("probability vector must be non-empty");
  double total = 0.0;
  for (double& x : p_) {
    if (!std::isfinite(x) || x < -tol || x > 1.0 + tol)
      throw InvalidArgument("probability entry out of [0,1]: " + std::to_string(x));
    if (x < 0.0) x = 0.0;
    total += x;
  }
  const double slack = std::max(tol, 8.0 * static_cast<double>(p_.size()) * std::numeric_limits<double>::epsilon());
  if (std::abs(total - 1.0) > slack)
    throw InvalidArgument("probability vector does not sum to 1 (sum = " + std::to_string(total) + ")");
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
  if (n == 0) throw InvalidArgument("uniform vector needs n >= 1");
  return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::vector<double> ProbabilityVector::sorted_descending() const {
  std::vector<double> out = p_;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// --- DenseOperator -----------------------------------------------------------

DenseOperator::DenseOperator(std::vector<std::size_t> dims, Matrix entries)
    : dims_(std::move(dims)), m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("operator must be square");
  if (dims_.empty()) throw DimensionMismatch("operator needs at least one subsystem");
  if (checked_product(dims_) != static_cast<std::size_t>(m_.rows()))
    throw DimensionMismatch("operator side does not equal the product of subsystem dimensions");
}

DenseOperator::DenseOperator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("operator must be square");
  dims_ = {static_cast<std::size_t>(m_.rows())};
}

DenseOperator DenseOperator::identity(std::vector<std::size_t> dims) {
  const auto side = idx(checked_product(dims));
  return {std::move(dims), Matrix::Identity(side, side)};
}

DenseOperator DenseOperator::diagonal(std::span<const double> values) {
  Matrix m = Matrix::Zero(idx(values.size()), idx(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(idx(i), idx(i)) = values[i];
  return DenseOperator(std::move(m));
}

DenseOperator DenseOperator::basis_projector(std::size_t d, std::size_t level) {
  if (level >= d) throw InvalidArgument("basis level out of range");
  Matrix m = Matrix::Zero(idx(d), idx(d));
  m(idx(level), idx(level)) = 1.0;
  return DenseOperator(std::move(m));
}

bool DenseOperator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool DenseOperator::is_unitary(double tol) const {
  const Matrix defect = m_ * m_.adjoint() - Matrix::Identity(m_.rows(), m_.cols());
  return defect.cwiseAbs().maxCoeff() <= tol;
}

bool DenseOperator::is_density(double tol) const {
  if (!is_hermitian(tol)) return false;
  if (std::abs(m_.trace() - Complex(1.0, 0.0)) > tol * std::max<double>(1.0, static_cast<double>(side()) / 64.0))
    return false;
  const auto evals = hermitian_eigenvalues(*this);
  return evals.front() >= -tol;
}

std::vector<double> DenseOperator::real_diagonal() const {
  std::vector<double> out(side());
  for (std::size_t i = 0; i < side(); ++i) out[i] = m_(idx(i), idx(i)).real();
  return out;
}

double DenseOperator::max_off_diagonal() const {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < m_.rows(); ++r)
    for (Eigen::Index c = 0; c < m_.cols(); ++c)
      if (r != c) worst = std::max(worst, std::abs(m_(r, c)));
  return worst;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  if (a.side() != b.side()) throw DimensionMismatch("operator product: side mismatch");
  return {a.dims(), a.matrix() * b.matrix()};
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      out.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return {std::move(dims), std::move(out)};
}

DenseOperator conjugate(const DenseOperator& u, const DenseOperator& rho) {
  if (u.side() != rho.side()) throw DimensionMismatch("conjugate: side mismatch");
  return {rho.dims(), u.matrix() * rho.matrix() * u.matrix().adjoint()};
}

double max_abs_difference(const DenseOperator& a, const DenseOperator& b) {
  if (a.side() != b.side()) throw DimensionMismatch("difference: side mismatch");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

DenseOperator partial_trace(const DenseOperator& op, std::span<const std::size_t> keep) {
  const auto& dims = op.dims();
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set must be non-empty");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw InvalidArgument("partial_trace: duplicate subsystem index");
  if (kept.back() >= dims.size()) throw InvalidArgument("partial_trace: subsystem index out of range");

  std::vector<std::size_t> traced;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (!std::binary_search(kept.begin(), kept.end(), s)) traced.push_back(s);

  const auto strides = strides_of(dims);
  const auto kept_off = offsets_for(dims, strides, kept);
  const auto traced_off = offsets_for(dims, strides, traced);

  const Matrix& m = op.matrix();
  Matrix out = Matrix::Zero(idx(kept_off.size()), idx(kept_off.size()));
  for (std::size_t r = 0; r < kept_off.size(); ++r)
    for (std::size_t c = 0; c < kept_off.size(); ++c) {
      Complex acc = 0.0;
      for (std::size_t t : traced_off) acc += m(idx(kept_off[r] + t), idx(kept_off[c] + t));
      out(idx(r), idx(c)) = acc;
    }

  std::vector<std::size_t> out_dims;
  for (std::size_t s : kept) out_dims.push_back(dims[s]);
  return {std::move(out_dims), std::move(out)};
}

std::vector<double> hermitian_eigenvalues(const DenseOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> density_spectrum(const DenseOperator& rho) {
  auto ev = hermitian_eigenvalues(rho);
  double total = 0.0;
  for (double& x : ev) {
    x = std::max(x, 0.0);
    total += x;
  }
  for (double& x : ev) x /= total;
  return ev;
}

Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

double fidelity(const DenseOperator& rho, const DenseOperator& sigma) {
  require_density(rho, "fidelity");
  require_density(sigma, "fidelity");
  if (rho.side() != sigma.side()) throw DimensionMismatch("fidelity: side mismatch");
  const Matrix root = psd_sqrt(rho.matrix());
  const Matrix inner = root * sigma.matrix() * root;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) tr += std::sqrt(std::max(solver.eigenvalues()(i), 0.0));
  return std::clamp(tr * tr, 0.0, 1.0);
}

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

double von_neumann_entropy(const DenseOperator& rho) {
  require_density(rho, "von_neumann_entropy");
  const auto spectrum = density_spectrum(rho);
  return std::max(0.0, shannon_entropy(spectrum));
}

double relative_entropy(const DenseOperator& rho, const DenseOperator& sigma) {
  require_density(rho, "relative_entropy");
  require_density(sigma, "relative_entropy");
  if (rho.side() != sigma.side()) throw DimensionMismatch("relative_entropy: side mismatch");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sigma.matrix());
  const Matrix& vecs = solver.eigenvectors();
  double cross = 0.0;  // tr(rho log sigma)
  for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
    const double weight = (vecs.col(k).adjoint() * rho.matrix() * vecs.col(k))(0, 0).real();
    const double s = solver.eigenvalues()(k);
    if (s <= kDensityTolerance) {
      if (weight > kDensityTolerance) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log(s);
  }
  return std::max(0.0, -von_neumann_entropy(rho) - cross);
}

double mutual_information(const DenseOperator& joint, const Bipartition& split) {
  const auto n = joint.dims().size();
  std::vector<std::size_t> a = split.first;
  std::sort(a.begin(), a.end());
  if (a.empty() || a.size() >= n || a.back() >= n || std::adjacent_find(a.begin(), a.end()) != a.end())
    throw InvalidArgument("mutual_information: invalid bipartition");
  std::vector<std::size_t> b;
  for (std::size_t s = 0; s < n; ++s)
    if (!std::binary_search(a.begin(), a.end(), s)) b.push_back(s);
  const double value = von_neumann_entropy(partial_trace(joint, a)) + von_neumann_entropy(partial_trace(joint, b)) -
                       von_neumann_entropy(joint);
  return std::max(0.0, value);
}

bool majorizes(std::span<const double> q, std::span<const double> p, double tol) {
  if (q.size() != p.size()) throw DimensionMismatch("majorizes: length mismatch");
  std::vector<double> qs(q.begin(), q.end());
  std::vector<double> ps(p.begin(), p.end());
  std::sort(qs.begin(), qs.end(), std::greater<>());
  std::sort(ps.begin(), ps.end(), std::greater<>());
  double sq = 0.0;
  double sp = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    sq += qs[i];
    sp += ps[i];
    if (sq < sp - tol) return false;
  }
  return std::abs(sq - sp) <= tol;
}

std::vector<std::size_t> descending_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

}  // namespace thermoknow
