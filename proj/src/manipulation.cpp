#include "thermoknow/manipulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "thermoknow/error.hpp"

namespace thermoknow {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

constexpr std::size_t kMaxProductEntries = 10'000'000;

std::size_t power(std::size_t base, std::size_t exp) {
  std::vector<std::size_t> dims(exp, base);
  return checked_product(dims);
}

void check_cap(std::size_t side, std::size_t cap, const char* what) {
  if (side > cap)
    throw DenseCapExceeded(std::string(what) + ": dimension " + std::to_string(side) + " exceeds dense cap " +
                           std::to_string(cap));
}

void check_estimates(std::span<const ProbabilityVector> estimates) {
  if (estimates.empty()) throw InvalidArgument("need at least one estimate");
  for (const auto& e : estimates)
    if (e.size() != estimates.front().size()) throw DimensionMismatch("estimates differ in dimension");
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

std::vector<double> products(std::span<const ProbabilityVector> estimates) {
  std::size_t total = 1;
  for (const auto& e : estimates) {
    if (total > kMaxProductEntries / e.size())
      throw DenseCapExceeded("product multiset larger than " + std::to_string(kMaxProductEntries) + " entries");
    total *= e.size();
  }
  std::vector<double> out{1.0};
  out.reserve(total);
  for (const auto& e : estimates) {
    std::vector<double> next;
    next.reserve(out.size() * e.size());
    for (double a : out)
      for (double b : e) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

std::vector<std::size_t> digits_of(std::size_t x, std::size_t m, std::size_t d) {
  std::vector<std::size_t> digits(m);
  for (std::size_t s = m; s-- > 0;) {
    digits[s] = x % d;
    x /= d;
  }
  return digits;
}

std::size_t index_of(std::span<const std::size_t> digits, std::size_t d) {
  std::size_t x = 0;
  for (std::size_t v : digits) x = x * d + v;
  return x;
}

}  // namespace

std::size_t dense_cap() {
  if (const char* env = std::getenv("THERMOKNOW_DENSE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

EstimateSet::EstimateSet(std::vector<Estimate> estimates)
    : estimates_(std::move(estimates)), setting_(std::vector<std::size_t>{1}) {
  if (estimates_.empty()) throw InvalidArgument("estimate set is empty");
  setting_ = estimates_.front().source.setting();
  for (const auto& e : estimates_) {
    if (e.state.dimension() != d()) throw DimensionMismatch("estimates differ in dimension");
    if (e.source.setting() != setting_) throw InvalidArgument("estimates come from different settings");
  }
}

std::vector<ProbabilityVector> EstimateSet::vectors() const {
  std::vector<ProbabilityVector> out;
  out.reserve(estimates_.size());
  for (const auto& e : estimates_) out.push_back(e.state.probs());
  return out;
}

EstimateSet all_estimates(const DiagonalState& rho, const MeasurementSetting& setting) {
  if (rho.dimension() != setting.d()) throw DimensionMismatch("all_estimates: state and setting dimensions differ");
  std::vector<Estimate> out;
  for (const auto& a : enumerate_for_setting(setting)) out.push_back(estimate_from_state(rho, a));
  return EstimateSet(std::move(out));
}

DiagonalState symmetrize(std::span<const ProbabilityVector> estimates) {
  check_estimates(estimates);
  std::vector<double> mean(estimates.front().size(), 0.0);
  for (const auto& e : estimates)
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += e[i];
  for (double& x : mean) x /= static_cast<double>(estimates.size());
  return DiagonalState(std::move(mean));
}

DiagonalState symmetrize(const EstimateSet& set) {
  const auto v = set.vectors();
  return symmetrize(std::span(v));
}

std::optional<ClosedFormKind> closed_form_kind(const MeasurementSetting& s) {
  const auto& t = s.block_sizes();
  const std::size_t d = s.d();
  if (t.size() == 2 && t[0] == 1 && d >= 3) return ClosedFormKind::OneVsRest;
  if (t.size() == 2 && t[0] == t[1] && d >= 4) return ClosedFormKind::HalfHalf;
  if (t == std::vector<std::size_t>{1, 2, 3}) return ClosedFormKind::OneTwoThree;
  return std::nullopt;
}

DiagonalState symmetrized_closed_form(const DiagonalState& rho, ClosedFormKind kind) {
  const std::size_t d = rho.dimension();
  const double dd = static_cast<double>(d);
  double scale = 0.0;
  double shift = 0.0;  // result_i = scale * p_i + shift
  switch (kind) {
    case ClosedFormKind::OneVsRest:
      if (d < 3) throw InvalidArgument("[1,d-1] closed form needs d >= 3");
      scale = 1.0 / (dd - 1.0);
      shift = (dd - 2.0) / (dd * (dd - 1.0));
      break;
    case ClosedFormKind::HalfHalf: {
      if (d < 4 || d % 2 != 0) throw InvalidArgument("[d/2,d/2] closed form needs even d >= 4");
      const std::size_t h = d / 2;
      const double pre = 2.0 / binomial(d - 1, h - 1);
      scale = pre * binomial(d - 2, h - 1) / dd;
      shift = pre * binomial(d - 2, h - 2) / dd;
      break;
    }
    case ClosedFormKind::OneTwoThree:
      if (d != 6) throw InvalidArgument("[1,2,3] closed form needs d = 6");
      scale = 2.0 / 5.0;
      shift = 1.0 / 10.0;
      break;
  }
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = scale * rho[i] + shift;
  return DiagonalState(std::move(out));
}

DiagonalState symmetrized_estimate(const DiagonalState& rho, const MeasurementSetting& setting) {
  if (rho.dimension() != setting.d()) throw DimensionMismatch("symmetrized_estimate: dimension mismatch");
  if (const auto kind = closed_form_kind(setting)) return symmetrized_closed_form(rho, *kind);
  return symmetrize(all_estimates(rho, setting));
}

DenseOperator permutation_operator(std::span<const std::size_t> perm, std::size_t d) {
  const std::size_t m = perm.size();
  std::vector<bool> seen(m, false);
  for (std::size_t s : perm) {
    if (s >= m || seen[s]) throw InvalidArgument("permutation_operator: not a permutation");
    seen[s] = true;
  }
  const std::size_t n = power(d, m);
  Matrix r = Matrix::Zero(idx(n), idx(n));
  std::vector<std::size_t> moved(m);
  for (std::size_t x = 0; x < n; ++x) {
    const auto digits = digits_of(x, m, d);
    for (std::size_t s = 0; s < m; ++s) moved[perm[s]] = digits[s];
    r(idx(index_of(moved, d)), idx(x)) = 1.0;
  }
  return {std::vector<std::size_t>(m, d), std::move(r)};
}

DenseOperator build_symmetrizer(std::size_t m, std::size_t d, std::size_t cap) {
  if (m == 0 || d == 0) throw InvalidArgument("build_symmetrizer: m and d must be positive");
  const std::size_t n = power(d, m);
  check_cap(n, cap, "build_symmetrizer");
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  Matrix sum = Matrix::Zero(idx(n), idx(n));
  std::size_t count = 0;
  do {
    sum += permutation_operator(perm, d).matrix();
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {std::vector<std::size_t>(m, d), sum / static_cast<double>(count)};
}

DenseOperator twirl(const DenseOperator& op, std::size_t m, std::size_t d, std::size_t cap) {
  const std::size_t n = power(d, m);
  check_cap(n, cap, "twirl");
  if (op.side() != n) throw DimensionMismatch("twirl: operator does not act on d^m levels");
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  Matrix sum = Matrix::Zero(idx(n), idx(n));
  std::size_t count = 0;
  do {
    const Matrix r = permutation_operator(perm, d).matrix();
    sum += r * op.matrix() * r.adjoint();
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {std::vector<std::size_t>(m, d), sum / static_cast<double>(count)};
}

DenseOperator product_operator(std::span<const ProbabilityVector> estimates, std::size_t cap) {
  check_estimates(estimates);
  const std::size_t d = estimates.front().size();
  check_cap(power(d, estimates.size()), cap, "product_operator");
  const auto diag = products(estimates);
  return {std::vector<std::size_t>(estimates.size(), d), DenseOperator::diagonal(diag).matrix()};
}

DenseOperator projected_first_marginal(std::span<const ProbabilityVector> estimates, std::size_t cap) {
  const DenseOperator omega = product_operator(estimates, cap);
  const DenseOperator pi = build_symmetrizer(estimates.size(), estimates.front().size(), cap);
  Matrix sandwiched = pi.matrix() * omega.matrix() * pi.matrix();
  const double norm = sandwiched.trace().real();
  if (!(norm > 0.0)) throw InvalidArgument("projected_first_marginal: state has no symmetric component");
  sandwiched /= norm;
  return partial_trace(DenseOperator(omega.dims(), std::move(sandwiched)), {0});
}

DenseOperator twirled_first_marginal(std::span<const ProbabilityVector> estimates, std::size_t cap) {
  const DenseOperator omega = product_operator(estimates, cap);
  return partial_trace(twirl(omega, estimates.size(), estimates.front().size(), cap), {0});
}

std::vector<FidelityRow> fidelity_sweep(const Hamiltonian& h, std::vector<MeasurementSetting> settings,
                                        std::vector<double> betas) {
  std::sort(settings.begin(), settings.end());
  std::sort(betas.begin(), betas.end());
  std::vector<FidelityRow> rows;
  rows.reserve(settings.size() * betas.size());
  for (const auto& s : settings) {
    if (s.d() != h.dimension()) throw DimensionMismatch("fidelity_sweep: setting and Hamiltonian dimensions differ");
    for (double beta : betas) {
      const DiagonalState rho = thermal_state(h, beta);
      const DiagonalState est = symmetrized_estimate(rho, s);
      rows.push_back({s, beta, fidelity(rho.to_operator(), est.to_operator())});
    }
  }
  return rows;
}

std::vector<std::size_t> sorted_product_order(std::span<const ProbabilityVector> estimates) {
  check_estimates(estimates);
  return descending_order(products(estimates));
}

ProbabilityVector ordered_first_marginal(std::span<const ProbabilityVector> estimates) {
  check_estimates(estimates);
  const std::size_t d = estimates.front().size();
  auto values = products(estimates);
  std::stable_sort(values.begin(), values.end(), std::greater<>());
  const std::size_t run = values.size() / d;
  std::vector<double> out(d, 0.0);
  for (std::size_t r = 0; r < values.size(); ++r) out[r / run] += values[r];
  return ProbabilityVector(std::move(out));
}

ProbabilityVector ordered_first_marginal(const EstimateSet& set) {
  const auto v = set.vectors();
  return ordered_first_marginal(std::span(v));
}

bool TransferMatrix::is_doubly_stochastic(double tol) const {
  if ((entries.array() < -tol).any()) return false;
  const auto ones = Eigen::VectorXd::Ones(entries.rows());
  return (entries.rowwise().sum() - ones).cwiseAbs().maxCoeff() <= tol &&
         (entries.colwise().sum().transpose() - ones).cwiseAbs().maxCoeff() <= tol;
}

bool TransferMatrix::certified_by_witness(double tol) const {
  if (!witness) return false;
  const auto n = witness->rows();
  if ((*witness * witness->transpose() - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol) return false;
  return (witness->array().square() - entries.array()).cwiseAbs().maxCoeff() <= tol;
}

std::vector<double> TransferMatrix::apply(std::span<const double> q) const {
  if (static_cast<Eigen::Index>(q.size()) != entries.cols()) throw DimensionMismatch("transfer matrix: length mismatch");
  const Eigen::Map<const Eigen::VectorXd> v(q.data(), idx(q.size()));
  const Eigen::VectorXd r = entries * v;
  return {r.data(), r.data() + r.size()};
}

TransferMatrix synthesize_orthostochastic(const ProbabilityVector& q, const ProbabilityVector& p) {
  if (q.size() != p.size()) throw DimensionMismatch("synthesize_orthostochastic: length mismatch");
  if (!majorizes(q, p)) throw InfeasiblePlan("synthesize_orthostochastic: q does not majorize p");
  const std::size_t d = q.size();
  const auto oq = descending_order(std::span(q.entries()));
  const auto op = descending_order(std::span(p.entries()));
  std::vector<double> x(d), y(d);
  for (std::size_t i = 0; i < d; ++i) {
    x[i] = q[oq[i]];
    y[i] = p[op[i]];
  }

  // T-transform chain: each step settles one coordinate, and a settled
  // coordinate is never rotated again, so the diagonal update stays exact.
  constexpr double eps = 1e-15;
  RealMatrix u = RealMatrix::Identity(idx(d), idx(d));
  for (std::size_t step = 0; step < d; ++step) {
    std::size_t j = d;
    for (std::size_t i = d; i-- > 0;)
      if (x[i] > y[i] + eps) {
        j = i;
        break;
      }
    if (j == d) break;
    std::size_t k = d;
    for (std::size_t i = j + 1; i < d; ++i)
      if (x[i] < y[i] - eps) {
        k = i;
        break;
      }
    if (k == d) break;
    const double delta = std::min(x[j] - y[j], y[k] - x[k]);
    const double lambda = 1.0 - delta / (x[j] - x[k]);
    const double c = std::sqrt(lambda);
    const double s = std::sqrt(1.0 - lambda);
    const Eigen::RowVectorXd rj = u.row(idx(j));
    const Eigen::RowVectorXd rk = u.row(idx(k));
    u.row(idx(j)) = c * rj + s * rk;
    u.row(idx(k)) = -s * rj + c * rk;
    const double xj = x[j];
    x[j] = lambda * xj + (1.0 - lambda) * x[k];
    x[k] = (1.0 - lambda) * xj + lambda * x[k];
  }

  // Undo the sorts: witness = P_p^T U P_q.
  RealMatrix w = RealMatrix::Zero(idx(d), idx(d));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) w(idx(op[r]), idx(oq[c])) = u(idx(r), idx(c));
  TransferMatrix out{w.array().square().matrix(), w};
  const auto image = out.apply(q.entries());
  for (std::size_t i = 0; i < d; ++i)
    if (std::abs(image[i] - p[i]) > 1e-8) throw InfeasiblePlan("synthesize_orthostochastic: residual above 1e-8");
  return out;
}

ConcentrationPlan plan_concentration(std::span<const ProbabilityVector> estimates, const DiagonalState& target) {
  check_estimates(estimates);
  const std::size_t d = estimates.front().size();
  if (target.dimension() != d) throw DimensionMismatch("plan_concentration: target dimension mismatch");
  ConcentrationPlan plan{target, ordered_first_marginal(estimates), false, std::nullopt, {}, estimates.size(), d};
  plan.feasible = majorizes(plan.ordered_marginal, target.probs());
  if (plan.feasible) {
    plan.transfer = synthesize_orthostochastic(plan.ordered_marginal, target.probs());
    plan.pre_permutation = sorted_product_order(estimates);
  }
  return plan;
}

ConcentrationPlan plan_concentration(const EstimateSet& set, const DiagonalState& target) {
  const auto v = set.vectors();
  return plan_concentration(std::span(v), target);
}

std::vector<std::vector<std::size_t>> concentration_subspaces(std::size_t m, std::size_t d) {
  if (m == 0 || d == 0) throw InvalidArgument("concentration_subspaces: m and d must be positive");
  const std::size_t count = power(d, m - 1);
  std::vector<std::vector<std::size_t>> out(count, std::vector<std::size_t>(d));
  std::vector<std::size_t> digits(m);
  for (std::size_t sub = 0; sub < count; ++sub) {
    const auto shifts = digits_of(sub, m - 1, d);
    for (std::size_t j = 0; j < d; ++j) {
      digits[0] = j;
      for (std::size_t s = 1; s < m; ++s) digits[s] = (j + shifts[s - 1]) % d;
      out[sub][j] = index_of(digits, d);
    }
  }
  return out;
}

DenseOperator block_unitary(const Matrix& block, std::size_t m, std::size_t d, std::size_t cap) {
  if (block.rows() != idx(d) || block.cols() != idx(d)) throw DimensionMismatch("block_unitary: block must be d x d");
  const std::size_t n = power(d, m);
  check_cap(n, cap, "block_unitary");
  Matrix v = Matrix::Zero(idx(n), idx(n));
  for (const auto& sub : concentration_subspaces(m, d))
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) v(idx(sub[r]), idx(sub[c])) = block(idx(r), idx(c));
  return {std::vector<std::size_t>(m, d), std::move(v)};
}

DenseOperator assemble_concentration_unitary(const ConcentrationPlan& plan, std::size_t cap) {
  if (!plan.feasible || !plan.transfer || !plan.transfer->witness)
    throw InfeasiblePlan("assemble_concentration_unitary: plan is not feasible");
  const std::size_t n = power(plan.d, plan.copies);
  check_cap(n, cap, "assemble_concentration_unitary");
  Matrix sort = Matrix::Zero(idx(n), idx(n));
  for (std::size_t r = 0; r < n; ++r) sort(idx(r), idx(plan.pre_permutation[r])) = 1.0;
  const Matrix block = plan.transfer->witness->cast<Complex>();
  const DenseOperator b = block_unitary(block, plan.copies, plan.d, cap);
  return {b.dims(), b.matrix() * sort};
}

}  // namespace thermoknow
