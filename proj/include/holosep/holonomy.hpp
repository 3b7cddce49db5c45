#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "holosep/frames.hpp"

namespace holosep {

// Connection A(t), dynamical matrix K(t) and restricted generator F(t) on a grid.
struct GeneratorPath {
  TimeGrid grid;
  std::vector<ComplexMatrix> a_mats;
  std::vector<ComplexMatrix> k_mats;
  std::vector<ComplexMatrix> f_mats;
};

// forward: later slices multiply on the left. reverse: later slices on the right.
enum class Ordering { forward, reverse };

enum class Classification { case_i, case_ii, case_iii, non_separable };

std::string_view to_string(Classification c);
Classification classification_from_string(std::string_view name);

bool is_separable(Classification c);

// enforce: an endpoint overlap that is not positive definite raises InPhaseError.
// report: the margin is recorded and the analysis continues.
enum class InPhasePolicy { enforce, report };

struct DecompositionReport {
  ComplexMatrix overlap;           // O(0, tau)
  ComplexMatrix w_final;           // W(tau) from integrating the Anandan equation
  ComplexMatrix w_direct;          // W(tau) from the frames, L(tau)^dagger S(tau)
  ComplexMatrix holonomic_factor;  // forward-ordered exp of the A-path
  ComplexMatrix dynamical_factor;  // forward-ordered exp of the K-path
  ComplexMatrix g_factor;          // forward-ordered exp of the A-path
  ComplexMatrix d_factor;          // reverse-ordered exp of the F-path
  double max_commutator = 0.0;     // max ||[A(t), K(t')]||_F over sampled pairs
  double separation_residual = 0.0;  // ||W(tau) - holonomic * dynamical||_F
  double product_residual = 0.0;     // ||W(tau) - G * D||_F
  Classification classification = Classification::non_separable;
  ComplexMatrix time_evolution;    // U(tau, 0) = O(0, tau) W(tau)
  double in_phase_margin = 0.0;
  double tau = 0.0;
  std::size_t steps = 0;
};

// A_jk(t) = <d phi_j/dt | phi_k>, second-order finite differences, anti-Hermitian projected.
std::vector<ComplexMatrix> connection_path(const SectionPath& section);

// K_jk(t) = -i <phi_j(t)| H(t) |phi_k(t)>.
std::vector<ComplexMatrix> k_path(const SectionPath& section, const HamiltonianSpec& spec);

// F(t) in the Schroedinger frame rotated by section.frame_rotation.
std::vector<ComplexMatrix> f_path(const SectionPath& section, const FramePath& schrodinger,
                                  const HamiltonianSpec& spec);

GeneratorPath generator_path(const SectionPath& section, const FramePath& schrodinger,
                             const HamiltonianSpec& spec, const Tolerances& tol = {});

// max_t ||K(t) W(t) - W(t) F(t)||_F
double kw_wf_residual(const GeneratorPath& generators, const std::vector<ComplexMatrix>& w);

/// Integrates dW/dt = (A + K) W from W(0) = I with midpoint-exponential slices,
/// the midpoint generator being the average of adjacent grid samples.
std::vector<ComplexMatrix> solve_anandan(const GeneratorPath& generators,
                                         const Tolerances& tol = {});

ComplexMatrix ordered_factor(const TimeGrid& grid, const std::vector<ComplexMatrix>& mats,
                             Ordering direction, const Tolerances& tol = {});

struct YuTongFactors {
  ComplexMatrix g;  // dG/dt = A G
  ComplexMatrix d;  // dD/dt = D F
};

YuTongFactors yu_tong_factors(const GeneratorPath& generators, const Tolerances& tol = {});

// Grid indices used for pairwise scans: all of them up to `limit`, otherwise
// `limit` evenly spread indices including both endpoints.
std::vector<std::size_t> scan_indices(std::size_t n, std::size_t limit = 64);

// max over sampled (t, t') of ||[lhs(t), rhs(t')]||_F
double max_cross_commutator(const std::vector<ComplexMatrix>& lhs,
                            const std::vector<ComplexMatrix>& rhs, std::size_t limit = 64);

/// Assembles every quantity of the holonomic/dynamical analysis for one run.
///
/// Classification, in precedence order:
///  - case_i: the subspace is constant (||P(t) - P(0)||_F and ||dP/dt||_F within
///    separation_tol);
///  - case_ii: max_t ||K(t)||_F <= separation_tol;
///  - case_iii: [A(t), K(t')] vanishes on every sampled pair, or the restricted
///    generators F(t) form a commuting family (then one time-independent unitary
///    diagonalizes them and a gauge exists in which A and K are jointly diagonal);
///  - non_separable otherwise.
/// Every test above is invariant under closed gauge transformations.
DecompositionReport separability_report(const SectionPath& section, const FramePath& schrodinger,
                                        const HamiltonianSpec& spec, const Tolerances& tol = {},
                                        InPhasePolicy policy = InPhasePolicy::enforce);

/// Phase-shift check: with phi_j(t) = exp(i f(t)) psi_j(t), f(0) = 0, the frame of
/// the shifted Hamiltonian H(t) - f'(t) 1 coincides with the section, so W(t) = I.
/// Returns max_t ||W(t) - I||_F.
double trivial_shift_check(const HamiltonianSpec& spec, const ComplexMatrix& psi0,
                           const std::function<double(double)>& f_dot, const TimeGrid& grid,
                           const Tolerances& tol = {});

}  // namespace holosep
