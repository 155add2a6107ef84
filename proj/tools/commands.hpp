#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace thermoknow::cli {

// Resolved run configuration. Config files use the same keys; flags win.
struct SweepConfig {
  std::size_t d = 3;
  std::optional<std::size_t> k;
  std::vector<double> spectrum;  // empty means equidistant
  std::optional<double> beta_min;
  std::optional<double> beta_max;
  std::optional<std::size_t> steps;
  bool log_scale = false;
  std::optional<double> beta;
  double beta_h = 0.1;
  std::vector<std::string> settings;  // "1,2" strings or "all"
  std::optional<std::string> assignment;
  std::optional<double> epsilon;
  std::vector<double> probs;
  std::string output;
  std::optional<std::string> format;  // csv or json; commands pick a default
  std::optional<std::size_t> dense_cap;
};

/// Reads a JSON config; unknown keys are rejected.
SweepConfig load_config(const std::string& path);
nlohmann::json to_json(const SweepConfig& c);

/// Parses "equidistant" or a comma-separated energy list.
std::vector<double> parse_spectrum(const std::string& text);
std::vector<double> parse_numbers(const std::string& text);

void cmd_settings(const SweepConfig& c, std::ostream& out);
void cmd_reconstruct(const SweepConfig& c, std::ostream& out);
void cmd_fidelity_sweep(const SweepConfig& c, std::ostream& out);
void cmd_majorization_sweep(const SweepConfig& c, std::ostream& out);
void cmd_ergotropy_sweep(const SweepConfig& c, std::ostream& out);
void cmd_entropy(const SweepConfig& c, std::ostream& out);
/// Returns the process exit code.
int cmd_verify(const std::string& level, std::optional<double> tolerance, std::ostream& out);

}  // namespace thermoknow::cli
