#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "holosep/cli.hpp"
#include "holosep/errors.hpp"
#include "holosep/random.hpp"

namespace holosep::cli {

namespace {

constexpr double kDemoTolerance = 1e-6;
constexpr double kCovarianceTolerance = 1e-6;

double max_abs_deviation(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

std::string format_matrix(const ComplexMatrix& m) {
  std::string out = "[";
  for (Index i = 0; i < m.rows(); ++i) {
    out += i == 0 ? "[" : " [";
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ", ";
      out += fmt::format("{:+.6f}{:+.6f}i", m(i, j).real(), m(i, j).imag());
    }
    out += "]";
  }
  return out + "]";
}

// Loads the config and maps every failure to an exit code; returns nullopt after
// printing the diagnostic.
std::optional<RunConfig> load_or_report(const std::filesystem::path& path, const Overrides& overrides,
                                        std::ostream& err) {
  try {
    return load_config(path, overrides);
  } catch (const Error& e) {
    fmt::print(err, "config error: {}\n", e.what());
  } catch (const nlohmann::json::exception& e) {
    fmt::print(err, "config error: {}\n", e.what());
  }
  return std::nullopt;
}

bool write_text(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    fmt::print(err, "cannot open '{}' for writing\n", path.string());
    return false;
  }
  file << text;
  file.flush();
  if (!file) {
    fmt::print(err, "failed writing '{}'\n", path.string());
    return false;
  }
  return true;
}

void print_summary(std::ostream& out, const DecompositionReport& r) {
  fmt::print(out, "classification       {}\n", to_string(r.classification));
  fmt::print(out, "max_commutator       {:.6e}\n", r.max_commutator);
  fmt::print(out, "separation_residual  {:.6e}\n", r.separation_residual);
  fmt::print(out, "product_residual     {:.6e}\n", r.product_residual);
  fmt::print(out, "in_phase_margin      {:.6e}\n", r.in_phase_margin);
}

void csv_header_block(std::string& line, const char* name, Index m) {
  for (Index j = 1; j <= m; ++j) {
    for (Index k = 1; k <= m; ++k) line += fmt::format(",{0}_{1}{2}_re,{0}_{1}{2}_im", name, j, k);
  }
}

void csv_value_block(std::string& line, const ComplexMatrix& mat) {
  for (Index j = 0; j < mat.rows(); ++j) {
    for (Index k = 0; k < mat.cols(); ++k) {
      line += fmt::format(",{:.17g},{:.17g}", mat(j, k).real(), mat(j, k).imag());
    }
  }
}

}  // namespace

int cmd_decompose(const std::filesystem::path& config_path, const std::filesystem::path& out_path,
                  const Overrides& overrides, std::ostream& out, std::ostream& err) {
  const auto config = load_or_report(config_path, overrides, err);
  if (!config) return kExitConfig;
  DecompositionReport report;
  try {
    const PipelineResult run = run_pipeline(*config);
    report = separability_report(run.section, run.schrodinger, config->system, config->tolerances,
                                 InPhasePolicy::enforce);
  } catch (const InPhaseError& e) {
    fmt::print(err, "in-phase violation: {}\n", e.what());
    return kExitInPhase;
  } catch (const Error& e) {
    fmt::print(err, "precondition failed: {}\n", e.what());
    return kExitConfig;
  }
  const std::string text = report_to_json(report).dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    if (!write_text(out_path, text, err)) return kExitIo;
    print_summary(out, report);
  }
  return kExitOk;
}

lambda::LambdaParams demo_params(lambda::Case which, const DemoOptions& options) {
  lambda::LambdaParams p;
  p.delta = options.delta.value_or(1.0);
  const bool resonant = which == lambda::Case::i && p.delta == 0.0;
  p.omega0 = options.omega0.value_or(resonant ? 1.0 : std::sqrt(3.0));
  p.tau = options.tau.value_or(resonant ? std::numbers::pi : 0.5 * std::numbers::pi);
  p.eta = options.eta.value_or(std::numbers::pi / 3.0);
  return p;
}

int cmd_demo(lambda::Case which, const DemoOptions& options, std::ostream& out, std::ostream& err) {
  const lambda::LambdaParams p = demo_params(which, options);
  DecompositionReport report;
  try {
    p.validate();
    const auto setup = lambda::case_setup(which, p);
    const TimeGrid grid = TimeGrid::uniform(p.tau, options.steps);
    const FramePath schrodinger = propagate_frame(setup.spec, setup.psi0, grid);
    const SectionPath section = build_section(setup.rule, schrodinger, setup.spec);
    report = separability_report(section, schrodinger, setup.spec);
  } catch (const InPhaseError& e) {
    fmt::print(err, "in-phase violation: {}\n", e.what());
    return kExitInPhase;
  } catch (const Error& e) {
    fmt::print(err, "demo failed: {}\n", e.what());
    return kExitConfig;
  }

  const char* names[] = {"i", "ii", "iii"};
  fmt::print(out, "Lambda system, case ({})\n", names[static_cast<int>(which)]);
  fmt::print(out, "  omega0 = {:.6g}, delta = {:.6g}, eta = {:.6g}, tau = {:.6g}, steps = {}\n",
             p.omega0, p.delta, p.eta, p.tau, options.steps);
  fmt::print(out, "  gamma = {:.6g}, phi_tau = {:.6g}\n\n", p.gamma(), p.precession_angle(p.tau));
  fmt::print(out, "{:<18} {:<52} {:<52} {}\n", "quantity", "analytic", "pipeline", "max |dev|");

  double worst = 0.0;
  auto row = [&](const char* name, const ComplexMatrix& analytic, const ComplexMatrix& numeric) {
    const double dev = max_abs_deviation(analytic, numeric);
    worst = std::max(worst, dev);
    fmt::print(out, "{:<18} {:<52} {:<52} {:.3e}\n", name, format_matrix(analytic),
               format_matrix(numeric), dev);
  };
  switch (which) {
    case lambda::Case::i:
      row("U(tau,0)", lambda::case_i_analytic(p), report.time_evolution);
      row("O(0,tau)", ComplexMatrix::Identity(2, 2), report.overlap);
      break;
    case lambda::Case::ii: {
      const auto analytic = lambda::case_ii_analytic(p);
      row("O(0,tau)", analytic.overlap, report.overlap);
      row("W(tau) direct", analytic.w, report.w_direct);
      row("W(tau) Anandan", analytic.w, report.w_final);
      row("holonomic", analytic.w, report.holonomic_factor);
      break;
    }
    case lambda::Case::iii: {
      const auto analytic = lambda::case_iii_analytic(p, TimeGrid::uniform(p.tau, 2));
      row("O(0,tau)", analytic.overlap, report.overlap);
      row("holonomic", analytic.holonomic, report.holonomic_factor);
      row("dynamical", analytic.dynamical, report.dynamical_factor);
      row("W(tau) direct", analytic.w, report.w_direct);
      row("W(tau) Anandan", analytic.w, report.w_final);
      break;
    }
  }
  fmt::print(out, "\n");
  print_summary(out, report);
  fmt::print(out, "max deviation        {:.3e}\n", worst);
  return worst <= kDemoTolerance ? kExitOk : kExitCovarianceViolation;
}

int cmd_separability(const std::filesystem::path& config_path, const Overrides& overrides,
                     std::ostream& out, std::ostream& err) {
  const auto config = load_or_report(config_path, overrides, err);
  if (!config) return kExitConfig;
  DecompositionReport report;
  try {
    const PipelineResult run = run_pipeline(*config);
    report = separability_report(run.section, run.schrodinger, config->system, config->tolerances,
                                 InPhasePolicy::report);
  } catch (const Error& e) {
    fmt::print(err, "precondition failed: {}\n", e.what());
    return kExitConfig;
  }
  print_summary(out, report);
  return is_separable(report.classification) ? kExitOk : kExitNonSeparable;
}

int cmd_export(const std::filesystem::path& config_path, const std::filesystem::path& out_csv,
               const Overrides& overrides, std::ostream& out, std::ostream& err) {
  const auto config = load_or_report(config_path, overrides, err);
  if (!config) return kExitConfig;
  std::string text;
  try {
    const PipelineResult run = run_pipeline(*config);
    const GeneratorPath gen =
        generator_path(run.section, run.schrodinger, config->system, config->tolerances);
    const auto w = w_path(run.section, run.schrodinger, config->tolerances);
    const auto o = overlap_path(run.section);
    const Index m = run.section.path.columns();
    std::string header = "t";
    for (const char* name : {"A", "K", "W", "O"}) csv_header_block(header, name, m);
    text = header + "\n";
    for (std::size_t k = 0; k < gen.grid.size(); ++k) {
      std::string line = fmt::format("{:.17g}", gen.grid[k]);
      csv_value_block(line, gen.a_mats[k]);
      csv_value_block(line, gen.k_mats[k]);
      csv_value_block(line, w[k]);
      csv_value_block(line, o[k]);
      text += line + "\n";
    }
  } catch (const Error& e) {
    fmt::print(err, "precondition failed: {}\n", e.what());
    return kExitConfig;
  }
  if (!write_text(out_csv, text, err)) return kExitIo;
  fmt::print(out, "wrote {} rows to {}\n", config->steps + 1, out_csv.string());
  return kExitOk;
}

int cmd_gauge_check(const std::filesystem::path& config_path, std::uint64_t seed,
                    const Overrides& overrides, std::ostream& out, std::ostream& err) {
  const auto config = load_or_report(config_path, overrides, err);
  if (!config) return kExitConfig;
  const Tolerances& tol = config->tolerances;
  DecompositionReport base;
  DecompositionReport moved;
  ComplexMatrix v0;
  try {
    const PipelineResult run = run_pipeline(*config);
    base = separability_report(run.section, run.schrodinger, config->system, tol, InPhasePolicy::report);
    random::Engine rng(seed);
    const auto gauge = random::closed_gauge(run.section.path.grid(), run.section.path.columns(), rng);
    v0 = gauge.front();
    const SectionPath transformed = gauge_transform(run.section, gauge, tol);
    moved = separability_report(transformed, run.schrodinger, config->system, tol, InPhasePolicy::report);
  } catch (const InPhaseError& e) {
    fmt::print(err, "in-phase violation: {}\n", e.what());
    return kExitInPhase;
  } catch (const Error& e) {
    fmt::print(err, "precondition failed: {}\n", e.what());
    return kExitConfig;
  }
  auto conj = [&](const ComplexMatrix& m) { return ComplexMatrix(v0.adjoint() * m * v0); };
  struct Row {
    const char* name;
    double deviation;
  };
  const Row rows[] = {
      {"overlap", (moved.overlap - conj(base.overlap)).norm()},
      {"w_direct", (moved.w_direct - conj(base.w_direct)).norm()},
      {"w_final", (moved.w_final - conj(base.w_final)).norm()},
      {"time_evolution", (moved.time_evolution - conj(base.time_evolution)).norm()},
      {"holonomic_factor", (moved.holonomic_factor - conj(base.holonomic_factor)).norm()},
      {"d_factor", (moved.d_factor - conj(base.d_factor)).norm()},
  };
  double worst = 0.0;
  fmt::print(out, "gauge seed {}\n", seed);
  for (const auto& r : rows) {
    worst = std::max(worst, r.deviation);
    fmt::print(out, "  {:<18} {:.3e}\n", r.name, r.deviation);
  }
  // The K-path transforms homogeneously, so its ordered exponential is covariant only
  // for time-independent gauges; reported, not checked.
  fmt::print(out, "  {:<18} {:.3e} (informational)\n", "dynamical_factor",
             (moved.dynamical_factor - conj(base.dynamical_factor)).norm());
  const bool same_verdict = base.classification == moved.classification;
  fmt::print(out, "classification {} -> {}\n", to_string(base.classification),
             to_string(moved.classification));
  fmt::print(out, "max deviation {:.3e}\n", worst);
  return (same_verdict && worst <= kCovarianceTolerance) ? kExitOk : kExitCovarianceViolation;
}

}  // namespace holosep::cli
