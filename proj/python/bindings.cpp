#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thermoknow/error.hpp"
#include "thermoknow/estimation.hpp"
#include "thermoknow/manipulation.hpp"
#include "thermoknow/thermo.hpp"
#include "thermoknow/verify.hpp"

namespace py = pybind11;
using namespace thermoknow;

namespace {

using Probs = std::vector<double>;

DiagonalState state(const Probs& p) { return DiagonalState(ProbabilityVector(p)); }

std::vector<ProbabilityVector> vectors(const std::vector<Probs>& estimates) {
  std::vector<ProbabilityVector> out;
  out.reserve(estimates.size());
  for (const auto& e : estimates) out.emplace_back(e);
  return out;
}

DenseOperator density(const Matrix& m) { return DenseOperator(m); }

py::dict report(const EntropyReport& r) {
  py::dict d;
  d["sigma"] = r.sigma_total;
  d["mutual_info"] = r.mutual_info;
  d["rel_entropy"] = r.rel_entropy;
  d["delta_s_system"] = r.delta_s_system;
  d["divergent"] = r.divergent;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coarse-grained estimates, symmetrization, concentration and their thermodynamics";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<ProbeTooSmall>(m, "ProbeTooSmall", base.ptr());
  py::register_exception<DenseCapExceeded>(m, "DenseCapExceeded", base.ptr());
  py::register_exception<InfeasiblePlan>(m, "InfeasiblePlan", base.ptr());
  py::register_exception<OrbitMismatch>(m, "OrbitMismatch", base.ptr());

  py::class_<MeasurementSetting>(m, "MeasurementSetting")
      .def(py::init<std::vector<std::size_t>>())
      .def_static("parse", &MeasurementSetting::parse)
      .def_static("one_vs_rest", &MeasurementSetting::one_vs_rest)
      .def_property_readonly("block_sizes", &MeasurementSetting::block_sizes)
      .def_property_readonly("d", &MeasurementSetting::d)
      .def_property_readonly("k", &MeasurementSetting::k)
      .def("__str__", [](const MeasurementSetting& s) { return s.to_string(); })
      .def("__repr__", [](const MeasurementSetting& s) { return "MeasurementSetting([" + s.to_string() + "])"; })
      .def(py::self == py::self)
      .def(py::self < py::self);

  py::class_<PartitionAssignment>(m, "PartitionAssignment")
      .def(py::init<std::vector<std::size_t>>())
      .def_static("parse", &PartitionAssignment::parse)
      .def_property_readonly("labels", &PartitionAssignment::labels)
      .def_property_readonly("d", &PartitionAssignment::d)
      .def_property_readonly("k", &PartitionAssignment::k)
      .def("blocks", &PartitionAssignment::blocks)
      .def("setting", &PartitionAssignment::setting)
      .def("canonical", &PartitionAssignment::canonical)
      .def("__str__", &PartitionAssignment::to_string)
      .def("__repr__", [](const PartitionAssignment& a) { return "PartitionAssignment('" + a.to_string() + "')"; })
      .def(py::self == py::self);

  m.def("enumerate_assignments", &enumerate_assignments, py::arg("d"), py::arg("k"));
  m.def("enumerate_settings", &enumerate_settings, py::arg("d"), py::arg("k"));
  m.def("enumerate_for_setting", &enumerate_for_setting, py::arg("setting"));
  m.def("setting_count", &setting_count, py::arg("setting"));

  m.def(
      "thermal_state",
      [](const std::vector<double>& energies, double beta) {
        return thermal_state(Hamiltonian(energies), beta).probs().entries();
      },
      py::arg("energies"), py::arg("beta"), "Gibbs populations for ascending energies.");
  m.def(
      "equidistant", [](std::size_t d, double spacing) { return Hamiltonian::equidistant(d, spacing).energies(); },
      py::arg("d"), py::arg("spacing") = 1.0);

  m.def(
      "extract_probe", [](const Probs& p, const PartitionAssignment& a) { return extract_probe(state(p), a).probs().entries(); },
      py::arg("probs"), py::arg("assignment"));
  m.def(
      "estimate", [](const Probs& p, const PartitionAssignment& a) { return estimate_from_state(state(p), a).state.probs().entries(); },
      py::arg("probs"), py::arg("assignment"));
  m.def(
      "build_ie_unitary", [](const PartitionAssignment& a, std::size_t r) { return build_ie_unitary(a, r).matrix(); },
      py::arg("assignment"), py::arg("reset_level") = 0);
  m.def(
      "build_eg_unitary", [](const PartitionAssignment& a) { return build_eg_unitary(a).matrix(); }, py::arg("assignment"));
  m.def(
      "simulate_pipeline",
      [](const Matrix& rho, const PartitionAssignment& a) {
        const auto r = simulate_pipeline(density(rho), a);
        return py::make_tuple(r.system.matrix(), r.probe.matrix(), r.memory.matrix());
      },
      py::arg("rho"), py::arg("assignment"), "Dense IE then EG; returns (system, probe, memory) density matrices.");
  m.def(
      "apply_coarse_channel",
      [](const Matrix& rho, const PartitionAssignment& a) { return apply_mp_channel(coarse_povm(a), density(rho)).matrix(); },
      py::arg("rho"), py::arg("assignment"));

  m.def(
      "all_estimates",
      [](const Probs& p, const MeasurementSetting& s) {
        std::vector<Probs> out;
        for (const auto& v : all_estimates(state(p), s).vectors()) out.push_back(v.entries());
        return out;
      },
      py::arg("probs"), py::arg("setting"));
  m.def(
      "symmetrize", [](const std::vector<Probs>& e) { return symmetrize(vectors(e)).probs().entries(); }, py::arg("estimates"));
  m.def(
      "symmetrized_estimate",
      [](const Probs& p, const MeasurementSetting& s) { return symmetrized_estimate(state(p), s).probs().entries(); },
      py::arg("probs"), py::arg("setting"));
  m.def(
      "projected_first_marginal", [](const std::vector<Probs>& e) { return projected_first_marginal(vectors(e)).matrix(); },
      py::arg("estimates"));
  m.def(
      "twirled_first_marginal", [](const std::vector<Probs>& e) { return twirled_first_marginal(vectors(e)).matrix(); },
      py::arg("estimates"));
  m.def(
      "fidelity_sweep",
      [](const std::vector<double>& energies, std::vector<MeasurementSetting> settings, std::vector<double> betas) {
        std::vector<std::tuple<std::string, double, double>> rows;
        for (const auto& r : fidelity_sweep(Hamiltonian(energies), std::move(settings), std::move(betas)))
          rows.emplace_back(r.setting.to_string(), r.beta, r.fidelity);
        return rows;
      },
      py::arg("energies"), py::arg("settings"), py::arg("betas"), "Rows (setting, beta, fidelity).");
  m.def(
      "ordered_first_marginal", [](const std::vector<Probs>& e) { return ordered_first_marginal(vectors(e)).entries(); },
      py::arg("estimates"));

  py::class_<TransferMatrix>(m, "TransferMatrix")
      .def_readonly("entries", &TransferMatrix::entries)
      .def_readonly("witness", &TransferMatrix::witness)
      .def("apply", &TransferMatrix::apply);
  m.def(
      "synthesize_orthostochastic",
      [](const Probs& q, const Probs& p) { return synthesize_orthostochastic(ProbabilityVector(q), ProbabilityVector(p)); },
      py::arg("q"), py::arg("p"));

  py::class_<ConcentrationPlan>(m, "ConcentrationPlan")
      .def_readonly("feasible", &ConcentrationPlan::feasible)
      .def_readonly("transfer", &ConcentrationPlan::transfer)
      .def_readonly("pre_permutation", &ConcentrationPlan::pre_permutation)
      .def_readonly("copies", &ConcentrationPlan::copies)
      .def_readonly("d", &ConcentrationPlan::d)
      .def_property_readonly("target", [](const ConcentrationPlan& p) { return p.target.probs().entries(); })
      .def_property_readonly("ordered_marginal", [](const ConcentrationPlan& p) { return p.ordered_marginal.entries(); });
  m.def(
      "plan_concentration", [](const std::vector<Probs>& e, const Probs& target) { return plan_concentration(vectors(e), state(target)); },
      py::arg("estimates"), py::arg("target"));
  m.def(
      "assemble_concentration_unitary", [](const ConcentrationPlan& p) { return assemble_concentration_unitary(p).matrix(); },
      py::arg("plan"));
  m.def(
      "product_operator", [](const std::vector<Probs>& e) { return product_operator(vectors(e)).matrix(); }, py::arg("estimates"));

  m.def(
      "ergotropy", [](const Probs& p, const std::vector<double>& e) { return ergotropy(std::span(p), std::span(e)); },
      py::arg("populations"), py::arg("energies"));
  m.def(
      "extraction_protocol",
      [](double beta_c, double beta_h, const std::vector<double>& e_c, const std::vector<double>& e_h,
         const MeasurementSetting& s) {
        const auto r = extraction_protocol(beta_c, beta_h, Hamiltonian(e_c), Hamiltonian(e_h), s);
        py::dict d;
        d["e_true"] = r.e_true;
        d["e_symmetrized"] = r.e_symmetrized;
        d["e_single"] = r.e_single;
        return d;
      },
      py::arg("beta_c"), py::arg("beta_h"), py::arg("energies_c"), py::arg("energies_h"), py::arg("setting"));
  m.def(
      "ie_entropy_production",
      [](const Probs& p, const PartitionAssignment& a) { return report(ie_entropy_production(state(p).to_operator(), a)); },
      py::arg("probs"), py::arg("assignment"));
  m.def(
      "eg_entropy_production",
      [](const Probs& p, const PartitionAssignment& a, double eps) {
        return report(eg_entropy_production(extract_probe(state(p), a), MemoryNoise(eps)));
      },
      py::arg("probs"), py::arg("assignment"), py::arg("epsilon"));

  m.def(
      "verify",
      [](const std::string& level) {
        if (level != "quick" && level != "full") throw InvalidArgument("level must be quick or full");
        std::vector<py::dict> out;
        for (const auto& s : run_verification(level == "full" ? VerifyLevel::Full : VerifyLevel::Quick)) {
          py::dict d;
          d["name"] = s.name;
          d["residual"] = s.residual;
          d["tolerance"] = s.tolerance;
          d["cases"] = s.cases;
          d["passed"] = s.passed();
          out.push_back(d);
        }
        return out;
      },
      py::arg("level") = "quick");
}
