#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "holosep/errors.hpp"
#include "holosep/holonomy.hpp"
#include "holosep/lambda_system.hpp"
#include "holosep/random.hpp"

namespace py = pybind11;
using namespace holosep;

namespace {

py::dict report_dict(const DecompositionReport& r) {
  py::dict d;
  d["overlap"] = r.overlap;
  d["w_final"] = r.w_final;
  d["w_direct"] = r.w_direct;
  d["holonomic_factor"] = r.holonomic_factor;
  d["dynamical_factor"] = r.dynamical_factor;
  d["g_factor"] = r.g_factor;
  d["d_factor"] = r.d_factor;
  d["max_commutator"] = r.max_commutator;
  d["separation_residual"] = r.separation_residual;
  d["product_residual"] = r.product_residual;
  d["classification"] = std::string(to_string(r.classification));
  d["time_evolution"] = r.time_evolution;
  d["in_phase_margin"] = r.in_phase_margin;
  d["tau"] = r.tau;
  d["steps"] = r.steps;
  return d;
}

SectionRule rule_from_name(const std::string& name, const ComplexMatrix& psi0) {
  if (name == "phase_anchored") return PhaseAnchoredSection{};
  if (name == "fixed") return FixedSection{psi0};
  throw ConfigError("section must be 'phase_anchored' or 'fixed'");
}

py::dict run(const HamiltonianSpec& spec, const ComplexMatrix& psi0, double tau, std::size_t steps,
             const SectionRule& rule, bool enforce_in_phase) {
  const TimeGrid grid = TimeGrid::uniform(tau, steps);
  const FramePath schrodinger = propagate_frame(spec, psi0, grid);
  const SectionPath section = build_section(rule, schrodinger, spec);
  return report_dict(separability_report(section, schrodinger, spec, {},
                                         enforce_in_phase ? InPhasePolicy::enforce
                                                          : InPhasePolicy::report));
}

lambda::Case case_from_name(const std::string& name) {
  if (name == "i") return lambda::Case::i;
  if (name == "ii") return lambda::Case::ii;
  if (name == "iii") return lambda::Case::iii;
  throw ConfigError("case must be one of 'i', 'ii', 'iii'");
}

lambda::LambdaParams make_params(double omega0, double delta, Complex omega1, Complex omega2,
                                 double tau, double eta) {
  lambda::LambdaParams p;
  p.omega0 = omega0;
  p.delta = delta;
  p.omega1 = omega1;
  p.omega2 = omega2;
  p.tau = tau;
  p.eta = eta;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_holosep, m) {
  m.doc() = "Holonomic/dynamical decomposition of subspace time evolution";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<InPhaseError>(m, "InPhaseError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("expm_skew", [](const ComplexMatrix& x) { return matkit::expm_skew(x); }, py::arg("x"));
  m.def(
      "polar_decompose",
      [](const ComplexMatrix& u) {
        const auto parts = matkit::polar_decompose(u);
        return py::make_tuple(parts.positive, parts.unitary);
      },
      py::arg("u"), "Left polar form u = p @ q; returns (p, q).");
  m.def("min_eigenvalue_hermitian",
        [](const ComplexMatrix& o) { return matkit::min_eigenvalue_hermitian(o); }, py::arg("o"));
  m.def("commutator_norm", &matkit::commutator_norm, py::arg("a"), py::arg("b"));

  m.def(
      "decompose_constant",
      [](const ComplexMatrix& h, const ComplexMatrix& psi0, double tau, std::size_t steps,
         const std::string& section, bool enforce_in_phase) {
        return run(HamiltonianSpec::constant(h), psi0, tau, steps, rule_from_name(section, psi0),
                   enforce_in_phase);
      },
      py::arg("h"), py::arg("psi0"), py::arg("tau"), py::arg("steps") = 4096,
      py::arg("section") = "phase_anchored", py::arg("enforce_in_phase") = false);
  m.def(
      "decompose_driven",
      [](const ComplexMatrix& h0, const ComplexMatrix& h1, double frequency,
         const ComplexMatrix& psi0, double tau, std::size_t steps, const std::string& section,
         bool enforce_in_phase) {
        return run(HamiltonianSpec::driven(h0, h1, frequency), psi0, tau, steps,
                   rule_from_name(section, psi0), enforce_in_phase);
      },
      py::arg("h0"), py::arg("h1"), py::arg("frequency"), py::arg("psi0"), py::arg("tau"),
      py::arg("steps") = 4096, py::arg("section") = "phase_anchored",
      py::arg("enforce_in_phase") = false,
      "Decomposition for H(t) = h0 + cos(frequency t) h1.");
  m.def(
      "lambda_case",
      [](const std::string& which, double omega0, double delta, Complex omega1, Complex omega2,
         double tau, double eta, std::size_t steps) {
        const auto p = make_params(omega0, delta, omega1, omega2, tau, eta);
        const auto setup = lambda::case_setup(case_from_name(which), p);
        return run(setup.spec, setup.psi0, tau, steps, setup.rule, true);
      },
      py::arg("case"), py::arg("omega0"), py::arg("delta"), py::arg("omega1") = Complex{1.0, 0.0},
      py::arg("omega2") = Complex{0.0, 0.0}, py::arg("tau"), py::arg("eta") = 0.0,
      py::arg("steps") = 4096);

  m.def(
      "lambda_hamiltonian",
      [](double omega0, double delta, Complex omega1, Complex omega2) {
        return lambda::lambda_hamiltonian(make_params(omega0, delta, omega1, omega2, 1.0, 0.0));
      },
      py::arg("omega0"), py::arg("delta"), py::arg("omega1") = Complex{1.0, 0.0},
      py::arg("omega2") = Complex{0.0, 0.0});
  m.def(
      "case_i_analytic",
      [](double omega0, double delta, double tau) {
        return lambda::case_i_analytic(make_params(omega0, delta, 1.0, 0.0, tau, 0.0));
      },
      py::arg("omega0"), py::arg("delta"), py::arg("tau"));
  m.def(
      "case_ii_analytic",
      [](double omega0, double delta, double tau) {
        const auto r = lambda::case_ii_analytic(make_params(omega0, delta, 1.0, 0.0, tau, 0.0));
        return py::make_tuple(r.overlap, r.w);
      },
      py::arg("omega0"), py::arg("delta"), py::arg("tau"), "Returns (overlap, w).");
  m.def(
      "case_iii_analytic",
      [](double omega0, double delta, double eta, double tau) {
        const auto p = make_params(omega0, delta, 1.0, 0.0, tau, eta);
        const auto r = lambda::case_iii_analytic(p, TimeGrid::uniform(tau, 2));
        py::dict d;
        d["overlap"] = r.overlap;
        d["holonomic"] = r.holonomic;
        d["dynamical"] = r.dynamical;
        d["w"] = r.w;
        return d;
      },
      py::arg("omega0"), py::arg("delta"), py::arg("eta"), py::arg("tau"));
}
