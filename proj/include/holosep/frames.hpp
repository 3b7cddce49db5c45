#pragma once

#include <variant>
#include <vector>

#include "holosep/dynamics.hpp"

namespace holosep {

// L(t) = frame for all t; requires a constant Schroedinger subspace.
struct FixedSection {
  ComplexMatrix frame;
};

// Column j of L(t) is exp(-i theta_j(t)) |psi_j(t)>, theta_j(t) = arg <psi_j(0)|psi_j(t)>.
struct PhaseAnchoredSection {};

// User-supplied section on the propagation grid.
struct CustomSection {
  FramePath path;
};

using SectionRule = std::variant<FixedSection, PhaseAnchoredSection, CustomSection>;

/// A reference frame L(t) spanning the Schroedinger subspace at every grid point.
///
/// `frame_rotation` R relates the initial frames, L(0) = S(0) R. Sections built
/// directly from a rule have R = I; a gauge transform by V(t) multiplies R by
/// V(0), and downstream quantities read the Schroedinger frame as S(t) R so that
/// W(0) = I always holds.
struct SectionPath {
  FramePath path;
  SectionRule rule;
  // Smallest eigenvalue of O(0, tau) when it is Hermitian within
  // 10 structure_tol; otherwise minus its Hermiticity defect.
  double in_phase_margin = 0.0;
  ComplexMatrix frame_rotation;
  // PhaseAnchored only: branch-continued theta_j(t_k), one vector per grid point.
  std::vector<Eigen::VectorXd> anchor_phases;

  bool in_phase(const Tolerances& tol) const { return in_phase_margin > tol.positivity_tol; }
};

SectionPath build_section(const SectionRule& rule, const FramePath& schrodinger,
                          const HamiltonianSpec& spec, const Tolerances& tol = {});

// O(0, t_k) = L(0)^dagger L(t_k).
std::vector<ComplexMatrix> overlap_path(const SectionPath& section);

// W_jk(t_k) = <phi_j(t_k)|psi_k(t_k)>, with the Schroedinger frame rotated by frame_rotation.
std::vector<ComplexMatrix> w_path(const SectionPath& section, const FramePath& schrodinger,
                                  const Tolerances& tol = {});

/// Change of frame phi_k -> sum_j phi_j V_jk(t). V must be unitary at every grid
/// point and closed, V(tau) = V(0). The result is a Custom section; an in-phase
/// source section must stay in phase (InPhaseError otherwise).
SectionPath gauge_transform(const SectionPath& section, const std::vector<ComplexMatrix>& vpath,
                            const Tolerances& tol = {});

double in_phase_margin(const ComplexMatrix& overlap, const Tolerances& tol = {});

// ||A A^dagger - B B^dagger||_F for two frames.
double subspace_mismatch(const ComplexMatrix& a, const ComplexMatrix& b);

// Shift each principal value by a multiple of 2 pi to stay within pi of its predecessor.
std::vector<double> unwrap_phases(std::span<const double> principal);

}  // namespace holosep
