#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include "thermoknow/error.hpp"
#include "thermoknow/estimation.hpp"
#include "thermoknow/io.hpp"
#include "thermoknow/manipulation.hpp"
#include "thermoknow/thermo.hpp"
#include "thermoknow/verify.hpp"

namespace thermoknow::cli {

namespace {

using Cell = std::variant<std::string, double, std::size_t, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

nlohmann::json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_number(v);
        }
        return v;
      },
      c);
}

void emit(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "json") {
    // Written by hand to keep column order (nlohmann sorts keys).
    out << "[";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      out << (i ? ",\n " : "\n ") << "{";
      for (std::size_t j = 0; j < t.header.size(); ++j)
        out << (j ? ", " : "") << nlohmann::json(t.header[j]).dump() << ": " << cell_json(t.rows[i][j]).dump();
      out << "}";
    }
    out << (t.rows.empty() ? "]\n" : "\n]\n");
    return;
  }
  CsvWriter csv(out, t.header);
  for (const auto& r : t.rows) {
    for (const auto& c : r) std::visit([&](const auto& v) { csv.cell(v); }, c);
    csv.end_row();
  }
}

std::string table_format(const SweepConfig& c) {
  const std::string f = c.format.value_or("csv");
  if (f != "csv" && f != "json") throw InvalidArgument("--format must be csv or json");
  return f;
}

Hamiltonian hamiltonian(const SweepConfig& c) {
  if (c.spectrum.empty()) return Hamiltonian::equidistant(c.d);
  if (c.spectrum.size() != c.d) throw InvalidArgument("--spectrum length differs from --d");
  return Hamiltonian(c.spectrum);
}

std::vector<double> beta_grid(const SweepConfig& c, double lo, double hi, std::size_t n) {
  lo = c.beta_min.value_or(lo);
  hi = c.beta_max.value_or(hi);
  n = c.steps.value_or(n);
  if (n < 2) throw InvalidArgument("--steps must be at least 2");
  if (!(lo < hi)) throw InvalidArgument("--beta-min must be below --beta-max");
  if (c.log_scale && lo <= 0.0) throw InvalidArgument("--log needs a positive --beta-min");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    grid[i] = c.log_scale ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  grid.back() = hi;
  return grid;
}

bool grid_requested(const SweepConfig& c) { return c.beta_min || c.beta_max || c.steps; }

std::vector<MeasurementSetting> resolve_settings(const SweepConfig& c) {
  std::vector<MeasurementSetting> out;
  const bool all = std::find(c.settings.begin(), c.settings.end(), "all") != c.settings.end();
  if (all) {
    const std::size_t k_lo = c.k ? *c.k : 1;
    const std::size_t k_hi = c.k ? *c.k : c.d;
    for (std::size_t k = k_lo; k <= k_hi; ++k)
      for (auto& s : enumerate_settings(c.d, k)) out.push_back(std::move(s));
  } else if (c.settings.empty()) {
    out.push_back(MeasurementSetting::one_vs_rest(c.d));
  } else {
    for (const auto& text : c.settings) {
      auto s = MeasurementSetting::parse(text);
      if (s.d() != c.d) throw InvalidArgument("setting " + text + " does not sum to --d");
      out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && item[used] == ' ') ++used;
    if (item.empty() || used != item.size()) throw InvalidArgument("not a number list: " + text);
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty number list");
  return out;
}

std::vector<double> parse_spectrum(const std::string& text) {
  if (text == "equidistant") return {};
  return parse_numbers(text);
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad config JSON: ") + e.what());
  }
  SweepConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "d") c.d = v.get<std::size_t>();
      else if (key == "k") c.k = v.get<std::size_t>();
      else if (key == "spectrum") c.spectrum = v.is_string() ? parse_spectrum(v.get<std::string>()) : v.get<std::vector<double>>();
      else if (key == "betas") {
        for (const auto& [bk, bv] : v.items()) {
          if (bk == "min") c.beta_min = bv.get<double>();
          else if (bk == "max") c.beta_max = bv.get<double>();
          else if (bk == "steps") c.steps = bv.get<std::size_t>();
          else if (bk == "scale") {
            const auto scale = bv.get<std::string>();
            if (scale != "linear" && scale != "log") throw InvalidArgument("betas.scale must be linear or log");
            c.log_scale = scale == "log";
          } else throw InvalidArgument("unknown config key betas." + bk);
        }
      } else if (key == "beta") c.beta = v.get<double>();
      else if (key == "beta_h") c.beta_h = v.get<double>();
      else if (key == "settings") {
        if (v.is_string()) c.settings = {v.get<std::string>()};
        else
          for (const auto& s : v) {
            if (s.is_string()) c.settings.push_back(s.get<std::string>());
            else c.settings.push_back(MeasurementSetting(s.get<std::vector<std::size_t>>()).to_string());
          }
      } else if (key == "assignment") c.assignment = v.get<std::string>();
      else if (key == "epsilon") {
        if (!v.is_null()) c.epsilon = v.get<double>();
      } else if (key == "probs") c.probs = v.get<std::vector<double>>();
      else if (key == "output") c.output = v.get<std::string>();
      else if (key == "format") c.format = v.get<std::string>();
      else if (key == "dense_cap") c.dense_cap = v.get<std::size_t>();
      else throw InvalidArgument("unknown config key " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  if (!c.spectrum.empty() && !j.contains("d")) c.d = c.spectrum.size();
  return c;
}

nlohmann::json to_json(const SweepConfig& c) {
  nlohmann::json j;
  j["d"] = c.d;
  j["k"] = c.k ? nlohmann::json(*c.k) : nlohmann::json(nullptr);
  j["spectrum"] = c.spectrum.empty() ? nlohmann::json("equidistant") : nlohmann::json(c.spectrum);
  nlohmann::json b;
  if (c.beta_min) b["min"] = *c.beta_min;
  if (c.beta_max) b["max"] = *c.beta_max;
  if (c.steps) b["steps"] = *c.steps;
  b["scale"] = c.log_scale ? "log" : "linear";
  j["betas"] = b;
  if (c.beta) j["beta"] = *c.beta;
  j["beta_h"] = c.beta_h;
  j["settings"] = c.settings;
  if (c.assignment) j["assignment"] = *c.assignment;
  j["epsilon"] = c.epsilon ? nlohmann::json(*c.epsilon) : nlohmann::json(nullptr);
  if (!c.probs.empty()) j["probs"] = c.probs;
  j["output"] = c.output;
  if (c.format) j["format"] = *c.format;
  if (c.dense_cap) j["dense_cap"] = *c.dense_cap;
  return j;
}

void cmd_settings(const SweepConfig& c, std::ostream& out) {
  SweepConfig all = c;
  all.settings = {"all"};
  Table t{{"setting", "k", "count", "assignment"}, {}};
  for (const auto& s : resolve_settings(all)) {
    const auto assignments = enumerate_for_setting(s);
    for (const auto& a : assignments) t.rows.push_back({s.to_string(), s.k(), assignments.size(), a.to_string()});
  }
  emit(t, table_format(c), out);
}

void cmd_reconstruct(const SweepConfig& c, std::ostream& out) {
  if (c.format && *c.format != "json") throw InvalidArgument("reconstruct writes JSON only");
  if (!c.assignment) throw InvalidArgument("reconstruct needs --assignment");
  const auto a = PartitionAssignment::parse(*c.assignment);
  const DiagonalState rho =
      c.probs.empty() ? thermal_state(hamiltonian(c), c.beta.value_or(1.0)) : DiagonalState(c.probs);
  if (a.d() != rho.dimension()) throw InvalidArgument("assignment length differs from the state dimension");

  const auto sigma = extract_probe(rho, a);
  const auto omega = estimate_from_probe(sigma);
  nlohmann::json j;
  j["assignment"] = a.to_string();
  j["setting"] = a.setting().block_sizes();
  j["rho"] = rho.probs().entries();
  j["probe"] = sigma.probs().entries();
  j["estimate"] = omega.state.probs().entries();
  j["fidelity"] = fidelity(rho.to_operator(), omega.state.to_operator());
  j["ie_dissipation"] = ie_dissipation(rho, a);

  const std::size_t cap = c.dense_cap.value_or(dense_cap());
  nlohmann::json check;
  if (a.setting().max_block() > a.k()) {
    check = {{"performed", false}, {"reason", "a block is larger than the probe"}};
  } else if (a.d() * a.k() * a.d() > cap) {
    check = {{"performed", false}, {"reason", "dense dimension exceeds the cap"}};
  } else {
    const auto analytic = omega.state.to_operator();
    const auto memory = simulate_pipeline(rho.to_operator(), a).memory;
    const auto channel = apply_mp_channel(coarse_povm(a), rho.to_operator());
    check = {{"performed", true},
             {"pipeline_residual", max_abs_difference(memory, analytic)},
             {"channel_residual", max_abs_difference(channel, analytic)},
             {"max_off_diagonal", memory.max_off_diagonal()}};
  }
  j["unitary_check"] = check;

  if (c.epsilon && a.setting().max_block() <= a.k()) {
    const MemoryNoise noise(*c.epsilon);
    const auto r = eg_entropy_production(sigma, noise);
    j["eg_entropy"] = {{"epsilon", *c.epsilon},
                       {"sigma", r.divergent ? nlohmann::json("inf") : nlohmann::json(r.sigma_total)},
                       {"closed_form", eg_dissipation_closed_form(omega, noise, r.delta_s_system)}};
  }
  out << j.dump(2) << '\n';
}

void cmd_fidelity_sweep(const SweepConfig& c, std::ostream& out) {
  const auto format = table_format(c);
  const auto rows = fidelity_sweep(hamiltonian(c), resolve_settings(c), beta_grid(c, 0.0, 3.0, 50));
  Table t{{"setting", "beta", "fidelity"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.setting.to_string(), r.beta, r.fidelity});
  emit(t, format, out);
}

void cmd_majorization_sweep(const SweepConfig& c, std::ostream& out) {
  const auto format = table_format(c);
  if (c.d < 2) throw InvalidArgument("majorization-sweep needs d >= 2");
  const auto h = hamiltonian(c);
  Table t{{"setting", "beta", "q1", "p1", "q1_plus_q2", "p1_plus_p2", "feasible"}, {}};
  for (const auto& s : resolve_settings(c))
    for (double beta : beta_grid(c, 0.0, 5.0, 100)) {
      const auto rho = thermal_state(h, beta);
      const auto plan = plan_concentration(all_estimates(rho, s), rho);
      const auto p = rho.probs().sorted_descending();
      const auto& q = plan.ordered_marginal;
      t.rows.push_back({s.to_string(), beta, q[0], p[0], q[0] + q[1], p[0] + p[1], plan.feasible});
    }
  emit(t, format, out);
}

void cmd_ergotropy_sweep(const SweepConfig& c, std::ostream& out) {
  const auto format = table_format(c);
  const auto h = hamiltonian(c);
  Table t{{"setting", "beta_c", "beta_h", "e_true", "e_symmetrized", "e_single"}, {}};
  for (const auto& s : resolve_settings(c))
    for (double beta_c : beta_grid(c, 0.2, 3.0, 30)) {
      const auto r = extraction_protocol(beta_c, c.beta_h, h, h, s);
      t.rows.push_back({s.to_string(), beta_c, c.beta_h, r.e_true, r.e_symmetrized, r.e_single});
    }
  emit(t, format, out);
}

void cmd_entropy(const SweepConfig& c, std::ostream& out) {
  const auto format = table_format(c);
  const auto h = hamiltonian(c);
  std::vector<PartitionAssignment> assignments;
  if (c.assignment) {
    assignments.push_back(PartitionAssignment::parse(*c.assignment));
    if (assignments.front().d() != c.d) throw InvalidArgument("assignment length differs from --d");
  } else {
    for (const auto& s : resolve_settings(c))
      for (auto& a : enumerate_for_setting(s)) assignments.push_back(std::move(a));
  }
  const auto betas = grid_requested(c) ? beta_grid(c, 0.0, 3.0, 50) : std::vector<double>{c.beta.value_or(1.0)};

  std::vector<std::string> header{"assignment", "beta", "sigma_ie", "probe_entropy"};
  if (c.epsilon) header.insert(header.end(), {"epsilon", "sigma_eg", "eg_closed_form", "eg_divergent"});
  Table t{header, {}};
  const std::optional<MemoryNoise> noise = c.epsilon ? std::optional<MemoryNoise>(MemoryNoise(*c.epsilon)) : std::nullopt;
  for (const auto& a : assignments)
    for (double beta : betas) {
      const auto rho = thermal_state(h, beta);
      const auto ie = ie_entropy_production(rho.to_operator(), a);
      std::vector<Cell> row{a.to_string(), beta, ie.sigma_total, ie_dissipation(rho, a)};
      if (noise) {
        row.emplace_back(*c.epsilon);
        if (a.setting().max_block() <= a.k()) {
          const auto sigma = extract_probe(rho, a);
          const auto eg = eg_entropy_production(sigma, *noise);
          row.emplace_back(eg.sigma_total);
          row.emplace_back(eg_dissipation_closed_form(estimate_from_probe(sigma), *noise, eg.delta_s_system));
          row.emplace_back(eg.divergent);
        } else {
          const double nan = std::nan("");
          row.insert(row.end(), {Cell(nan), Cell(nan), Cell(false)});
        }
      }
      t.rows.push_back(std::move(row));
    }
  emit(t, format, out);
}

int cmd_verify(const std::string& level, std::optional<double> tolerance, std::ostream& out) {
  VerifyLevel l = VerifyLevel::Quick;
  if (level == "full") l = VerifyLevel::Full;
  else if (level != "quick") throw InvalidArgument("--level must be quick or full");
  bool ok = true;
  for (const auto& s : run_verification(l, tolerance)) {
    out << (s.passed() ? "PASS " : "FAIL ") << s.name << " residual=" << format_number(s.residual)
        << " tolerance=" << format_number(s.tolerance) << " cases=" << s.cases << '\n';
    ok = ok && s.passed();
  }
  return ok ? 0 : 1;
}

}  // namespace thermoknow::cli
