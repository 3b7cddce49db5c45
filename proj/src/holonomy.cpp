#include "holosep/holonomy.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "holosep/errors.hpp"

namespace holosep {

namespace {

double max_norm(const std::vector<ComplexMatrix>& mats) {
  double out = 0.0;
  for (const auto& m : mats) out = std::max(out, m.norm());
  return out;
}

void require_aligned(const GeneratorPath& g) {
  const std::size_t n = g.grid.size();
  if (g.a_mats.size() != n || g.k_mats.size() != n || g.f_mats.size() != n) {
    throw PreconditionError("generator path lengths do not match its grid");
  }
}

}  // namespace

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::case_i:
      return "case_i";
    case Classification::case_ii:
      return "case_ii";
    case Classification::case_iii:
      return "case_iii";
    case Classification::non_separable:
      return "non_separable";
  }
  return "non_separable";
}

Classification classification_from_string(std::string_view name) {
  for (auto c : {Classification::case_i, Classification::case_ii, Classification::case_iii,
                 Classification::non_separable}) {
    if (to_string(c) == name) return c;
  }
  throw PreconditionError(fmt::format("unknown classification '{}'", name));
}

bool is_separable(Classification c) { return c != Classification::non_separable; }

std::vector<ComplexMatrix> connection_path(const SectionPath& section) {
  const auto& frames = section.path.frames();
  if (frames.size() < 3) throw PreconditionError("connection_path: grid needs at least 3 points");
  const auto derivatives = differentiate_path(section.path.grid(), frames);
  std::vector<ComplexMatrix> out;
  out.reserve(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    out.push_back(matkit::anti_hermitian_part(derivatives[k].adjoint() * frames[k]));
  }
  return out;
}

std::vector<ComplexMatrix> k_path(const SectionPath& section, const HamiltonianSpec& spec) {
  if (spec.dimension() != section.path.dimension()) {
    throw PreconditionError("k_path: Hamiltonian/section dimension mismatch");
  }
  std::vector<ComplexMatrix> out;
  out.reserve(section.path.size());
  for (std::size_t k = 0; k < section.path.size(); ++k) {
    const ComplexMatrix& l = section.path[k];
    const ComplexMatrix h = sample_hamiltonian(spec, section.path.grid()[k]);
    out.push_back(matkit::anti_hermitian_part(-kI * (l.adjoint() * h * l)));
  }
  return out;
}

std::vector<ComplexMatrix> f_path(const SectionPath& section, const FramePath& schrodinger,
                                  const HamiltonianSpec& spec) {
  std::vector<ComplexMatrix> out;
  out.reserve(schrodinger.size());
  const ComplexMatrix& r = section.frame_rotation;
  for (std::size_t k = 0; k < schrodinger.size(); ++k) {
    out.push_back(r.adjoint() * restricted_generator(spec, schrodinger, k) * r);
  }
  return out;
}

GeneratorPath generator_path(const SectionPath& section, const FramePath& schrodinger,
                             const HamiltonianSpec& spec, const Tolerances& tol) {
  if (section.path.size() != schrodinger.size()) {
    throw PreconditionError("generator_path: section and Schroedinger grids differ");
  }
  GeneratorPath g{section.path.grid(), connection_path(section), k_path(section, spec),
                  f_path(section, schrodinger, spec)};
  for (const auto* family : {&g.a_mats, &g.k_mats, &g.f_mats}) {
    for (const auto& m : *family) {
      if (!(matkit::anti_hermiticity_defect(m) <= 10.0 * tol.structure_tol)) {
        throw PreconditionError("generator path contains a non-anti-Hermitian matrix");
      }
    }
  }
  return g;
}

double kw_wf_residual(const GeneratorPath& generators, const std::vector<ComplexMatrix>& w) {
  require_aligned(generators);
  if (w.size() != generators.grid.size()) throw PreconditionError("W path does not match grid");
  double out = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    out = std::max(out, (generators.k_mats[k] * w[k] - w[k] * generators.f_mats[k]).norm());
  }
  return out;
}

std::vector<ComplexMatrix> solve_anandan(const GeneratorPath& generators, const Tolerances& tol) {
  require_aligned(generators);
  const TimeGrid& grid = generators.grid;
  const Index m = generators.a_mats.front().rows();
  std::vector<ComplexMatrix> w;
  w.reserve(grid.size());
  w.push_back(ComplexMatrix::Identity(m, m));
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double dt = grid[k + 1] - grid[k];
    const ComplexMatrix mid = 0.5 * (generators.a_mats[k] + generators.k_mats[k] +
                                     generators.a_mats[k + 1] + generators.k_mats[k + 1]);
    w.push_back(matkit::expm_skew(mid * dt, tol) * w.back());
  }
  return w;
}

ComplexMatrix ordered_factor(const TimeGrid& grid, const std::vector<ComplexMatrix>& mats,
                             Ordering direction, const Tolerances& tol) {
  if (mats.size() != grid.size()) throw PreconditionError("ordered_factor: path does not match grid");
  const Index m = mats.front().rows();
  ComplexMatrix out = ComplexMatrix::Identity(m, m);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double dt = grid[k + 1] - grid[k];
    const ComplexMatrix slice = matkit::expm_skew(0.5 * (mats[k] + mats[k + 1]) * dt, tol);
    out = direction == Ordering::forward ? ComplexMatrix(slice * out) : ComplexMatrix(out * slice);
  }
  return out;
}

YuTongFactors yu_tong_factors(const GeneratorPath& generators, const Tolerances& tol) {
  require_aligned(generators);
  return {ordered_factor(generators.grid, generators.a_mats, Ordering::forward, tol),
          ordered_factor(generators.grid, generators.f_mats, Ordering::reverse, tol)};
}

std::vector<std::size_t> scan_indices(std::size_t n, std::size_t limit) {
  std::vector<std::size_t> out;
  if (n == 0) return out;
  if (n <= limit || limit < 2) {
    out.resize(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = k;
    return out;
  }
  for (std::size_t i = 0; i < limit; ++i) {
    out.push_back(static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(limit - 1))));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double max_cross_commutator(const std::vector<ComplexMatrix>& lhs,
                            const std::vector<ComplexMatrix>& rhs, std::size_t limit) {
  double out = 0.0;
  const auto li = scan_indices(lhs.size(), limit);
  const auto ri = scan_indices(rhs.size(), limit);
  for (std::size_t i : li) {
    for (std::size_t j : ri) out = std::max(out, matkit::commutator_norm(lhs[i], rhs[j]));
  }
  return out;
}

DecompositionReport separability_report(const SectionPath& section, const FramePath& schrodinger,
                                        const HamiltonianSpec& spec, const Tolerances& tol,
                                        InPhasePolicy policy) {
  tol.validate();
  if (section.path.size() != schrodinger.size()) {
    throw PreconditionError("separability_report: section and Schroedinger grids differ");
  }
  DecompositionReport report;
  report.tau = schrodinger.grid().tau();
  report.steps = schrodinger.grid().steps();

  report.overlap = overlap_path(section).back();
  report.in_phase_margin = in_phase_margin(report.overlap, tol);
  if (policy == InPhasePolicy::enforce && !(report.in_phase_margin > tol.positivity_tol)) {
    throw InPhaseError(fmt::format(
        "section violates the in-phase condition: O(0, tau) margin {:.3e} <= {:.3e}",
        report.in_phase_margin, tol.positivity_tol));
  }

  const GeneratorPath generators = generator_path(section, schrodinger, spec, tol);
  report.w_direct = w_path(section, schrodinger, tol).back();
  report.w_final = solve_anandan(generators, tol).back();

  const TimeGrid& grid = generators.grid;
  report.holonomic_factor = ordered_factor(grid, generators.a_mats, Ordering::forward, tol);
  report.dynamical_factor = ordered_factor(grid, generators.k_mats, Ordering::forward, tol);
  const YuTongFactors yt = yu_tong_factors(generators, tol);
  report.g_factor = yt.g;
  report.d_factor = yt.d;

  report.max_commutator = max_cross_commutator(generators.a_mats, generators.k_mats);
  report.separation_residual =
      (report.w_direct - report.holonomic_factor * report.dynamical_factor).norm();
  report.product_residual = (report.w_direct - report.g_factor * report.d_factor).norm();
  report.time_evolution = report.overlap * report.w_direct;

  const auto projectors = projector_path(schrodinger);
  double drift = 0.0;
  for (const auto& p : projectors) drift = std::max(drift, (p - projectors.front()).norm());
  const double rate = max_norm(differentiate_path(grid, projectors));
  const double sep = tol.separation_tol;
  if (drift <= sep && rate <= sep) {
    report.classification = Classification::case_i;
  } else if (max_norm(generators.k_mats) <= sep) {
    report.classification = Classification::case_ii;
  } else if (report.max_commutator <= sep ||
             max_cross_commutator(generators.f_mats, generators.f_mats) <= sep) {
    report.classification = Classification::case_iii;
  } else {
    report.classification = Classification::non_separable;
  }
  return report;
}

double trivial_shift_check(const HamiltonianSpec& spec, const ComplexMatrix& psi0,
                           const std::function<double(double)>& f_dot, const TimeGrid& grid,
                           const Tolerances& tol) {
  const FramePath original = propagate_frame(spec, psi0, grid, tol);
  const Index n = spec.dimension();
  const HamiltonianFn shifted_h = [&spec, &f_dot, n](double t) {
    return ComplexMatrix(sample_hamiltonian(spec, t) - f_dot(t) * ComplexMatrix::Identity(n, n));
  };
  const FramePath shifted = propagate_frame(shifted_h, n, psi0, grid, tol);

  // f accumulated with the same midpoint rule as the propagator.
  std::vector<ComplexMatrix> frames;
  frames.reserve(grid.size());
  double f = 0.0;
  frames.push_back(original[0]);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    f += f_dot(0.5 * (grid[k] + grid[k + 1])) * (grid[k + 1] - grid[k]);
    frames.push_back(std::exp(kI * f) * original[k + 1]);
  }
  const SectionPath section =
      build_section(CustomSection{FramePath(grid, std::move(frames), tol)}, shifted, spec, tol);
  double out = 0.0;
  const Index m = psi0.cols();
  for (const auto& w : w_path(section, shifted, tol)) {
    out = std::max(out, (w - ComplexMatrix::Identity(m, m)).norm());
  }
  return out;
}

}  // namespace holosep
