#include "holosep/frames.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "holosep/errors.hpp"

namespace holosep {

namespace {

void require_same_subspace(const FramePath& section, const FramePath& schrodinger,
                           const Tolerances& tol, const char* what) {
  if (section.size() != schrodinger.size()) {
    throw PreconditionError(fmt::format("{}: section has {} points, Schroedinger path has {}", what,
                                        section.size(), schrodinger.size()));
  }
  if (section.dimension() != schrodinger.dimension() || section.columns() != schrodinger.columns()) {
    throw PreconditionError(fmt::format("{}: frame shapes differ", what));
  }
  for (std::size_t k = 0; k < section.size(); ++k) {
    const double mismatch = subspace_mismatch(section[k], schrodinger[k]);
    if (!(mismatch <= 10.0 * tol.structure_tol)) {
      throw PreconditionError(fmt::format(
          "{}: section does not span the Schroedinger subspace at t = {} (||P_L - P_S||_F = {:.3e})",
          what, schrodinger.grid()[k], mismatch));
    }
  }
}

double endpoint_margin(const FramePath& path, const Tolerances& tol) {
  return in_phase_margin(path.frames().front().adjoint() * path.frames().back(), tol);
}

SectionPath fixed_section(const FixedSection& rule, const FramePath& schrodinger,
                          const Tolerances& tol) {
  const ComplexMatrix& frame = rule.frame;
  if (frame.rows() != schrodinger.dimension() || frame.cols() != schrodinger.columns()) {
    throw PreconditionError("fixed section frame has the wrong shape");
  }
  std::vector<ComplexMatrix> frames(schrodinger.size(), frame);
  FramePath path(schrodinger.grid(), std::move(frames), tol);
  for (std::size_t k = 0; k < schrodinger.size(); ++k) {
    const double mismatch = subspace_mismatch(frame, schrodinger[k]);
    if (!(mismatch <= 10.0 * tol.structure_tol)) {
      throw PreconditionError(fmt::format(
          "fixed section requires a constant subspace, but the Schroedinger subspace moves "
          "(||P_L - P_S(t)||_F = {:.3e} at t = {})",
          mismatch, schrodinger.grid()[k]));
    }
  }
  SectionPath out{std::move(path), rule, 0.0, schrodinger[0].adjoint() * frame, {}};
  out.in_phase_margin = endpoint_margin(out.path, tol);
  return out;
}

SectionPath phase_anchored_section(const FramePath& schrodinger, const Tolerances& tol) {
  const Index m = schrodinger.columns();
  const ComplexMatrix& initial = schrodinger[0];
  std::vector<ComplexMatrix> frames;
  frames.reserve(schrodinger.size());
  std::vector<std::vector<double>> principal(static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < schrodinger.size(); ++k) {
    ComplexMatrix frame = schrodinger[k];
    for (Index j = 0; j < m; ++j) {
      const Complex c = initial.col(j).dot(schrodinger[k].col(j));
      const double modulus = std::abs(c);
      if (!(modulus > tol.positivity_tol)) {
        throw PreconditionError(fmt::format(
            "phase-anchored section is singular: |<psi_{}(0)|psi_{}(t)>| = {:.3e} at t = {}", j + 1,
            j + 1, modulus, schrodinger.grid()[k]));
      }
      frame.col(j) *= std::conj(c) / modulus;
      principal[static_cast<std::size_t>(j)].push_back(std::arg(c));
    }
    frames.push_back(std::move(frame));
  }
  // Column j of frames[0] equals psi_j(0) up to a unit phase conj(c)/|c| with c = 1 in exact
  // arithmetic; pin it so L(0) = S(0) holds bit for bit.
  frames[0] = initial;
  std::vector<std::vector<double>> unwrapped;
  for (const auto& p : principal) unwrapped.push_back(unwrap_phases(p));
  std::vector<Eigen::VectorXd> phases(schrodinger.size(), Eigen::VectorXd(m));
  for (std::size_t k = 0; k < schrodinger.size(); ++k) {
    for (Index j = 0; j < m; ++j) phases[k](j) = unwrapped[static_cast<std::size_t>(j)][k];
  }
  SectionPath out{FramePath(schrodinger.grid(), std::move(frames), tol), PhaseAnchoredSection{}, 0.0,
                  ComplexMatrix::Identity(m, m), std::move(phases)};
  out.in_phase_margin = endpoint_margin(out.path, tol);
  return out;
}

SectionPath custom_section(const CustomSection& rule, const FramePath& schrodinger,
                           const Tolerances& tol) {
  const auto& given = rule.path.grid().times();
  const auto& expected = schrodinger.grid().times();
  if (given.size() != expected.size()) {
    throw PreconditionError("custom section grid does not match the propagation grid");
  }
  for (std::size_t k = 0; k < given.size(); ++k) {
    if (std::abs(given[k] - expected[k]) > 1e-12 * std::max(1.0, std::abs(expected[k]))) {
      throw PreconditionError(
          fmt::format("custom section time {} differs from propagation time {}", given[k], expected[k]));
    }
  }
  require_same_subspace(rule.path, schrodinger, tol, "custom section");
  SectionPath out{rule.path, rule, 0.0, schrodinger[0].adjoint() * rule.path[0], {}};
  out.in_phase_margin = endpoint_margin(out.path, tol);
  return out;
}

}  // namespace

double subspace_mismatch(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a * a.adjoint() - b * b.adjoint()).norm();
}

double in_phase_margin(const ComplexMatrix& overlap, const Tolerances& tol) {
  const double defect = matkit::hermiticity_defect(overlap);
  if (!(defect <= 10.0 * tol.structure_tol)) return -defect;
  Tolerances relaxed = tol;
  relaxed.structure_tol = 10.0 * tol.structure_tol;
  return matkit::min_eigenvalue_hermitian(overlap, relaxed);
}

std::vector<double> unwrap_phases(std::span<const double> principal) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> out(principal.begin(), principal.end());
  for (std::size_t k = 1; k < out.size(); ++k) {
    const double jump = out[k] - out[k - 1];
    out[k] -= two_pi * std::round(jump / two_pi);
  }
  return out;
}

SectionPath build_section(const SectionRule& rule, const FramePath& schrodinger,
                          const HamiltonianSpec& spec, const Tolerances& tol) {
  tol.validate();
  if (spec.dimension() != schrodinger.dimension()) {
    throw PreconditionError("build_section: Hamiltonian/frame dimension mismatch");
  }
  return std::visit(
      [&](const auto& r) -> SectionPath {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, FixedSection>) {
          return fixed_section(r, schrodinger, tol);
        } else if constexpr (std::is_same_v<T, PhaseAnchoredSection>) {
          return phase_anchored_section(schrodinger, tol);
        } else {
          return custom_section(r, schrodinger, tol);
        }
      },
      rule);
}

std::vector<ComplexMatrix> overlap_path(const SectionPath& section) {
  const ComplexMatrix initial_adj = section.path[0].adjoint();
  std::vector<ComplexMatrix> out;
  out.reserve(section.path.size());
  for (const auto& l : section.path.frames()) out.push_back(initial_adj * l);
  return out;
}

std::vector<ComplexMatrix> w_path(const SectionPath& section, const FramePath& schrodinger,
                                  const Tolerances& tol) {
  require_same_subspace(section.path, schrodinger, tol, "w_path");
  std::vector<ComplexMatrix> out;
  out.reserve(schrodinger.size());
  for (std::size_t k = 0; k < schrodinger.size(); ++k) {
    out.push_back(section.path[k].adjoint() * schrodinger[k] * section.frame_rotation);
  }
  return out;
}

SectionPath gauge_transform(const SectionPath& section, const std::vector<ComplexMatrix>& vpath,
                            const Tolerances& tol) {
  const Index m = section.path.columns();
  if (vpath.size() != section.path.size()) {
    throw PreconditionError(fmt::format("gauge path has {} matrices for {} grid points",
                                        vpath.size(), section.path.size()));
  }
  for (std::size_t k = 0; k < vpath.size(); ++k) {
    if (vpath[k].rows() != m || vpath[k].cols() != m) {
      throw PreconditionError(fmt::format("gauge matrix at index {} is not {}x{}", k, m, m));
    }
    const double defect = matkit::isometry_defect(vpath[k]);
    if (!(defect <= 10.0 * tol.structure_tol)) {
      throw PreconditionError(fmt::format(
          "gauge matrix at index {} is not unitary (||V^dagger V - I||_F = {:.3e})", k, defect));
    }
  }
  const double closure = (vpath.back() - vpath.front()).norm();
  if (!(closure <= tol.structure_tol)) {
    throw PreconditionError(fmt::format(
        "gauge transformation is not closed: ||V(tau) - V(0)||_F = {:.3e}", closure));
  }
  std::vector<ComplexMatrix> frames;
  frames.reserve(vpath.size());
  for (std::size_t k = 0; k < vpath.size(); ++k) frames.push_back(section.path[k] * vpath[k]);
  FramePath path(section.path.grid(), std::move(frames), tol);
  SectionPath out{path, CustomSection{path}, 0.0, section.frame_rotation * vpath.front(), {}};
  out.in_phase_margin = endpoint_margin(out.path, tol);
  if (section.in_phase(tol) && !out.in_phase(tol)) {
    throw InPhaseError(fmt::format("gauge-transformed section is not in phase (margin {:.3e})",
                                   out.in_phase_margin));
  }
  return out;
}

}  // namespace holosep
