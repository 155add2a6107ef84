#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "thermoknow/error.hpp"

namespace {

using thermoknow::cli::SweepConfig;

// Raw flag values; only the ones actually given override the config file.
struct Flags {
  std::string config;
  std::size_t d = 0, k = 0, steps = 0, dense_cap = 0;
  double beta = 0, beta_min = 0, beta_max = 0, beta_h = 0, epsilon = 0;
  bool log_scale = false;
  std::string spectrum, assignment, probs, out, format;
  std::vector<std::string> settings;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override it")->check(CLI::ExistingFile);
  sub->add_option("--d", f.d, "system dimension")->check(CLI::PositiveNumber);
  sub->add_option("--k", f.k, "probe dimension")->check(CLI::PositiveNumber);
  sub->add_option("--spectrum", f.spectrum, "'equidistant' or comma-separated energies");
  sub->add_option("--beta", f.beta, "single inverse temperature");
  sub->add_option("--beta-min", f.beta_min, "grid start");
  sub->add_option("--beta-max", f.beta_max, "grid end");
  sub->add_option("--steps", f.steps, "grid points (>= 2)");
  sub->add_flag("--log", f.log_scale, "geometric beta grid");
  sub->add_option("--beta-h", f.beta_h, "hot inverse temperature (ergotropy-sweep)");
  sub->add_option("--setting", f.settings, "t-vector like 1,2,3 or 'all'; repeatable");
  sub->add_option("--assignment", f.assignment, "block label per level, e.g. 0,1,1");
  sub->add_option("--probs", f.probs, "explicit populations instead of a thermal state");
  sub->add_option("--epsilon", f.epsilon, "memory noise in (0, 1)");
  sub->add_option("--out", f.out, "output file (stdout when absent)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--dense-cap", f.dense_cap, "largest dense dimension")->check(CLI::PositiveNumber);
}

SweepConfig resolve(const CLI::App* sub, const Flags& f) {
  SweepConfig c = f.config.empty() ? SweepConfig{} : thermoknow::cli::load_config(f.config);
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--spectrum")) {
    c.spectrum = thermoknow::cli::parse_spectrum(f.spectrum);
    if (!c.spectrum.empty()) c.d = c.spectrum.size();
  }
  if (given("--d")) c.d = f.d;
  if (given("--k")) c.k = f.k;
  if (given("--beta")) c.beta = f.beta;
  if (given("--beta-min")) c.beta_min = f.beta_min;
  if (given("--beta-max")) c.beta_max = f.beta_max;
  if (given("--steps")) c.steps = f.steps;
  if (given("--log")) c.log_scale = f.log_scale;
  if (given("--beta-h")) c.beta_h = f.beta_h;
  if (given("--setting")) c.settings = f.settings;
  if (given("--assignment")) c.assignment = f.assignment;
  if (given("--probs")) c.probs = thermoknow::cli::parse_numbers(f.probs);
  if (given("--epsilon")) c.epsilon = f.epsilon;
  if (given("--out")) c.output = f.out;
  if (given("--format")) c.format = f.format;
  if (given("--dense-cap")) c.dense_cap = f.dense_cap;
  if (!c.probs.empty()) c.d = c.probs.size();
  if (c.assignment && !given("--d") && c.spectrum.empty() && c.probs.empty())
    c.d = static_cast<std::size_t>(std::count(c.assignment->begin(), c.assignment->end(), ',')) + 1;
  return c;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int run_command(const std::string& name, const SweepConfig& c, int argc, char** argv,
                const std::function<void(const SweepConfig&, std::ostream&)>& body) {
  if (c.dense_cap) setenv("THERMOKNOW_DENSE_CAP", std::to_string(*c.dense_cap).c_str(), 1);
  if (c.output.empty()) {
    body(c, std::cout);
    return 0;
  }
  // Render fully before touching the file so a failed run leaves nothing behind.
  std::ostringstream data;
  body(c, data);
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw thermoknow::InvalidArgument("cannot write " + c.output);
  out << data.str();

  nlohmann::json meta;
  meta["command"] = name;
  meta["argv"] = std::vector<std::string>(argv, argv + argc);
  meta["config"] = thermoknow::cli::to_json(c);
  meta["generated_at"] = utc_now();
  meta["tool"] = "thermoknow";
  std::ofstream(c.output + ".meta.json") << meta.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse-grained knowledge acquisition: estimates, symmetrization, concentration, thermodynamics"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    std::function<void(const SweepConfig&, std::ostream&)> body;
  };
  const std::vector<Entry> entries{
      {"settings", "list measurement settings and their assignments", thermoknow::cli::cmd_settings},
      {"reconstruct", "probe, estimate, fidelity and dense cross-checks for one assignment",
       thermoknow::cli::cmd_reconstruct},
      {"fidelity-sweep", "symmetrized-estimate fidelity against beta", thermoknow::cli::cmd_fidelity_sweep},
      {"majorization-sweep", "concentration feasibility against beta", thermoknow::cli::cmd_majorization_sweep},
      {"ergotropy-sweep", "work extracted with true, symmetrized and single estimates",
       thermoknow::cli::cmd_ergotropy_sweep},
      {"entropy", "entropy production of extraction and estimate generation", thermoknow::cli::cmd_entropy},
  };
  std::vector<Flags> flags(entries.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    subs.push_back(app.add_subcommand(entries[i].name, entries[i].help));
    add_flags(subs.back(), flags[i]);
  }

  std::string level = "quick";
  double tolerance = 0.0;
  auto* verify = app.add_subcommand("verify", "cross-path equivalence suites; non-zero exit on failure");
  verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--tolerance", tolerance, "override every suite tolerance (failure-path testing)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const std::optional<double> tol = verify->count("--tolerance") ? std::optional<double>(tolerance) : std::nullopt;
      return thermoknow::cli::cmd_verify(level, tol, std::cout);
    }
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (subs[i]->parsed())
        return run_command(entries[i].name, resolve(subs[i], flags[i]), argc, argv, entries[i].body);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
