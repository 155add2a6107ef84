#include "thermoknow/settings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "thermoknow/error.hpp"

namespace thermoknow {

namespace {

std::vector<std::size_t> parse_list(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
      throw InvalidArgument("cannot parse integer list: '" + std::string(text) + "'");
    out.push_back(value);
    pos = end + 1;
  }
  return out;
}

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

// Restricted growth strings: labels[0] = 0 and labels[i] <= 1 + max(labels[0..i)).
void generate_rgs(std::size_t d, std::size_t k, std::vector<std::size_t>& prefix, std::size_t used,
                  std::vector<PartitionAssignment>& out) {
  const std::size_t level = prefix.size();
  if (level == d) {
    if (used == k) out.emplace_back(prefix, k);
    return;
  }
  // Not enough levels left to open the remaining blocks.
  if (k - used > d - level) return;
  const std::size_t limit = std::min(used + 1, k);
  for (std::size_t label = 0; label < limit; ++label) {
    prefix.push_back(label);
    generate_rgs(d, k, prefix, std::max(used, label + 1), out);
    prefix.pop_back();
  }
}

void generate_compositions(std::size_t remaining, std::size_t parts, std::size_t min_part,
                           std::vector<std::size_t>& prefix, std::vector<MeasurementSetting>& out) {
  if (parts == 0) {
    if (remaining == 0) out.emplace_back(prefix);
    return;
  }
  for (std::size_t v = min_part; v * parts <= remaining; ++v) {
    prefix.push_back(v);
    generate_compositions(remaining - v, parts - 1, v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

// --- MeasurementSetting ------------------------------------------------------

MeasurementSetting::MeasurementSetting(std::vector<std::size_t> block_sizes) : t_(std::move(block_sizes)) {
  if (t_.empty()) throw InvalidArgument("setting needs at least one block");
  for (std::size_t t : t_)
    if (t == 0) throw InvalidArgument("setting block sizes must be positive");
  std::sort(t_.begin(), t_.end());
  d_ = std::accumulate(t_.begin(), t_.end(), std::size_t{0});
}

MeasurementSetting MeasurementSetting::parse(std::string_view text) { return MeasurementSetting(parse_list(text)); }

MeasurementSetting MeasurementSetting::one_vs_rest(std::size_t d) {
  if (d < 2) throw InvalidArgument("one_vs_rest needs d >= 2");
  return MeasurementSetting({1, d - 1});
}

std::string MeasurementSetting::to_string(char sep) const {
  std::string out;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(t_[i]);
  }
  return out;
}

// --- PartitionAssignment -----------------------------------------------------

PartitionAssignment::PartitionAssignment(std::vector<std::size_t> labels, std::size_t k)
    : labels_(std::move(labels)), k_(k) {
  if (labels_.empty()) throw InvalidArgument("assignment needs d >= 1");
  if (k_ < 1 || k_ > labels_.size()) throw InvalidArgument("assignment needs 1 <= k <= d");
  std::vector<bool> used(k_, false);
  for (std::size_t l : labels_) {
    if (l >= k_) throw InvalidArgument("assignment label out of range");
    used[l] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw InvalidArgument("assignment leaves a probe level without system levels");
}

PartitionAssignment::PartitionAssignment(std::vector<std::size_t> labels)
    : PartitionAssignment(labels, labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1) {}

PartitionAssignment PartitionAssignment::parse(std::string_view text) { return PartitionAssignment(parse_list(text)); }

std::vector<std::vector<std::size_t>> PartitionAssignment::blocks() const {
  std::vector<std::vector<std::size_t>> out(k_);
  for (std::size_t level = 0; level < labels_.size(); ++level) out[labels_[level]].push_back(level);
  return out;
}

std::vector<std::size_t> PartitionAssignment::block_sizes() const {
  std::vector<std::size_t> t(k_, 0);
  for (std::size_t l : labels_) ++t[l];
  return t;
}

std::vector<std::size_t> PartitionAssignment::offsets() const {
  const auto t = block_sizes();
  std::vector<std::size_t> alpha(k_, 0);
  for (std::size_t i = 1; i < k_; ++i) alpha[i] = alpha[i - 1] + t[i - 1];
  return alpha;
}

MeasurementSetting PartitionAssignment::setting() const { return MeasurementSetting(block_sizes()); }

PartitionAssignment PartitionAssignment::canonical() const {
  std::vector<std::size_t> relabel(k_, k_);
  std::size_t next = 0;
  std::vector<std::size_t> out(labels_.size());
  for (std::size_t level = 0; level < labels_.size(); ++level) {
    auto& r = relabel[labels_[level]];
    if (r == k_) r = next++;
    out[level] = r;
  }
  return {std::move(out), k_};
}

bool PartitionAssignment::is_canonical() const { return canonical().labels_ == labels_; }

std::string PartitionAssignment::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(labels_[i]);
  }
  return out;
}

// --- enumeration -------------------------------------------------------------

std::vector<PartitionAssignment> enumerate_assignments(std::size_t d, std::size_t k) {
  if (k < 1 || k > d) throw InvalidArgument("enumerate_assignments needs 1 <= k <= d");
  std::vector<PartitionAssignment> out;
  std::vector<std::size_t> prefix;
  prefix.reserve(d);
  generate_rgs(d, k, prefix, 0, out);
  return out;
}

std::vector<PartitionAssignment> enumerate_for_setting(const MeasurementSetting& setting) {
  std::vector<PartitionAssignment> out;
  for (auto& a : enumerate_assignments(setting.d(), setting.k()))
    if (a.setting() == setting) out.push_back(std::move(a));
  return out;
}

std::uint64_t setting_count(const MeasurementSetting& setting) { return enumerate_for_setting(setting).size(); }

std::uint64_t setting_count_formula(const MeasurementSetting& setting) {
  if (setting.d() > 20) throw InvalidArgument("setting_count_formula: d too large for 64-bit factorials");
  std::uint64_t denom = 1;
  const auto& t = setting.block_sizes();
  for (std::size_t i = 0; i < t.size();) {
    std::size_t j = i;
    while (j < t.size() && t[j] == t[i]) ++j;
    denom *= factorial(j - i);
    for (std::size_t r = i; r < j; ++r) denom *= factorial(t[r]);
    i = j;
  }
  return factorial(setting.d()) / denom;
}

std::vector<MeasurementSetting> enumerate_settings(std::size_t d, std::size_t k) {
  if (k < 1 || k > d) throw InvalidArgument("enumerate_settings needs 1 <= k <= d");
  std::vector<MeasurementSetting> out;
  std::vector<std::size_t> prefix;
  generate_compositions(d, k, 1, prefix, out);
  std::sort(out.begin(), out.end());
  return out;
}

double coupling_count_formula(std::size_t d, std::size_t k) {
  return (std::pow(static_cast<double>(k), static_cast<double>(d)) - static_cast<double>(k)) /
         static_cast<double>(factorial(k));
}

}  // namespace thermoknow
