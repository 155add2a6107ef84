#pragma once

// Couplings between a d-level system and a k-level probe.
//
// A PartitionAssignment maps every system level to a probe level (its block).
// A MeasurementSetting is the multiset of block sizes, stored ascending.
// Assignments serialize as the comma-separated label tuple, e.g. "0,1,1,2,2,2".

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace thermoknow {

class MeasurementSetting {
 public:
  explicit MeasurementSetting(std::vector<std::size_t> block_sizes);

  /// Parses "1,2,3" (any order; stored ascending).
  static MeasurementSetting parse(std::string_view text);
  /// [1, d-1]: one level against the rest.
  static MeasurementSetting one_vs_rest(std::size_t d);

  const std::vector<std::size_t>& block_sizes() const { return t_; }
  std::size_t d() const { return d_; }
  std::size_t k() const { return t_.size(); }
  std::size_t max_block() const { return t_.back(); }

  std::string to_string(char sep = ',') const;

  auto operator<=>(const MeasurementSetting&) const = default;

 private:
  std::vector<std::size_t> t_;
  std::size_t d_ = 0;
};

class PartitionAssignment {
 public:
  /// `labels[level]` is the block of `level`; every block 0..k-1 must be used.
  PartitionAssignment(std::vector<std::size_t> labels, std::size_t k);
  explicit PartitionAssignment(std::vector<std::size_t> labels);

  static PartitionAssignment parse(std::string_view text);

  std::size_t d() const { return labels_.size(); }
  std::size_t k() const { return k_; }
  std::size_t label(std::size_t level) const { return labels_.at(level); }
  const std::vector<std::size_t>& labels() const { return labels_; }

  /// Levels of each block, ascending, indexed by block label.
  std::vector<std::vector<std::size_t>> blocks() const;
  /// t_i = |P_i| indexed by block label.
  std::vector<std::size_t> block_sizes() const;
  /// alpha_i = sum_{j<i} t_j.
  std::vector<std::size_t> offsets() const;
  MeasurementSetting setting() const;

  /// Relabels blocks so that labels appear in order of their smallest level.
  PartitionAssignment canonical() const;
  bool is_canonical() const;

  std::string to_string() const;

  auto operator<=>(const PartitionAssignment&) const = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t k_ = 0;
};

/// All set partitions of {0..d-1} into exactly k blocks, canonically labeled,
/// in lexicographic order of the label tuple.
std::vector<PartitionAssignment> enumerate_assignments(std::size_t d, std::size_t k);

/// Canonical assignments whose block-size multiset equals `setting`.
std::vector<PartitionAssignment> enumerate_for_setting(const MeasurementSetting& setting);

/// Number of assignments of a setting, by enumeration.
std::uint64_t setting_count(const MeasurementSetting& setting);

/// d! / (prod t_i! * prod_s mult_s!) where mult_s counts blocks of size s.
std::uint64_t setting_count_formula(const MeasurementSetting& setting);

/// All settings of (d, k): partitions of d into k positive parts, lexicographic.
std::vector<MeasurementSetting> enumerate_settings(std::size_t d, std::size_t k);

/// (k^d - k) / k!, the closed-form tuple count. Only exact for k = 2.
double coupling_count_formula(std::size_t d, std::size_t k);

}  // namespace thermoknow
