#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "holosep/matkit.hpp"

namespace holosep {

// Strictly increasing times starting at 0 (hbar = 1 units throughout).
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  // `steps` equal intervals on [0, tau]; steps + 1 points.
  static TimeGrid uniform(double tau, std::size_t steps);

  std::size_t size() const { return times_.size(); }
  std::size_t steps() const { return times_.size() - 1; }
  double operator[](std::size_t k) const { return times_[k]; }
  double tau() const { return times_.back(); }
  std::span<const double> times() const { return times_; }

 private:
  std::vector<double> times_;
};

struct ConstantHamiltonian {
  ComplexMatrix h0;
};

// Rotating-frame Lambda Hamiltonian
//   H = omega0 (|3><b| + |b><3|) + 2 delta |3><3|,  |b> = conj(omega1)|1> + conj(omega2)|2>.
struct LambdaHamiltonian {
  double omega0 = 1.0;
  double delta = 0.0;
  Complex omega1{1.0, 0.0};
  Complex omega2{0.0, 0.0};
};

// Samples on their own grid, linearly interpolated in t.
struct SampledHamiltonian {
  TimeGrid grid;
  std::vector<ComplexMatrix> samples;
};

// H(t) = h0 + cos(frequency * t) h1.
struct DrivenHamiltonian {
  ComplexMatrix h0;
  ComplexMatrix h1;
  double frequency = 1.0;
};

class HamiltonianSpec {
 public:
  using Model = std::variant<ConstantHamiltonian, LambdaHamiltonian, SampledHamiltonian,
                             DrivenHamiltonian>;

  static HamiltonianSpec constant(ComplexMatrix h0, const Tolerances& tol = {});
  static HamiltonianSpec lambda(double omega0, double delta, Complex omega1, Complex omega2,
                                const Tolerances& tol = {});
  static HamiltonianSpec sampled(TimeGrid grid, std::vector<ComplexMatrix> samples,
                                 const Tolerances& tol = {});
  static HamiltonianSpec driven(ComplexMatrix h0, ComplexMatrix h1, double frequency = 1.0,
                                const Tolerances& tol = {});

  Index dimension() const { return dimension_; }
  const Model& model() const { return model_; }

 private:
  HamiltonianSpec(Model model, Index dimension) : model_(std::move(model)), dimension_(dimension) {}

  Model model_;
  Index dimension_;
};

using HamiltonianFn = std::function<ComplexMatrix(double)>;

// An orthonormal N x M frame per grid point.
class FramePath {
 public:
  // Throws PreconditionError on length/shape mismatch or non-orthonormal frames
  // (||F^dagger F - I||_F > 10 structure_tol).
  FramePath(TimeGrid grid, std::vector<ComplexMatrix> frames, const Tolerances& tol = {});

  const TimeGrid& grid() const { return grid_; }
  const std::vector<ComplexMatrix>& frames() const { return frames_; }
  const ComplexMatrix& operator[](std::size_t k) const { return frames_[k]; }
  std::size_t size() const { return frames_.size(); }
  Index dimension() const { return frames_.front().rows(); }
  Index columns() const { return frames_.front().cols(); }

 private:
  TimeGrid grid_;
  std::vector<ComplexMatrix> frames_;
};

ComplexMatrix sample_hamiltonian(const HamiltonianSpec& spec, double t);

HamiltonianFn as_function(const HamiltonianSpec& spec);

/// Propagates the columns of `psi0` with the midpoint exponential rule
///   S(t_{k+1}) = exp(-i H(t_mid) dt) S(t_k),
/// Loewdin-reorthonormalizing after each step. S(0) = psi0 exactly.
FramePath propagate_frame(const HamiltonianSpec& spec, const ComplexMatrix& psi0,
                          const TimeGrid& grid, const Tolerances& tol = {});

// Same integrator for an arbitrary Hermitian-valued callable of dimension `dimension`.
FramePath propagate_frame(const HamiltonianFn& hamiltonian, Index dimension,
                          const ComplexMatrix& psi0, const TimeGrid& grid,
                          const Tolerances& tol = {});

// P_M(t_k) = S(t_k) S(t_k)^dagger.
std::vector<ComplexMatrix> projector_path(const FramePath& path);

// F_jk(t_k) = -i <psi_j(t_k)| H(t_k) |psi_k(t_k)>.
ComplexMatrix restricted_generator(const HamiltonianSpec& spec, const FramePath& path,
                                   std::size_t k);

// Second-order finite-difference time derivative of a matrix-valued path
// (central in the interior, one-sided three-point at the ends). Needs >= 3 points.
std::vector<ComplexMatrix> differentiate_path(const TimeGrid& grid,
                                              std::span<const ComplexMatrix> values);

}  // namespace holosep
