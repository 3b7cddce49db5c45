#include "holosep/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "holosep/errors.hpp"

namespace holosep {

namespace {

ComplexMatrix checked_hermitian(const ComplexMatrix& h, const Tolerances& tol, const char* what) {
  matkit::require_square(h, what);
  if (!matkit::all_finite(h)) throw PreconditionError(fmt::format("{} has non-finite entries", what));
  const double defect = matkit::hermiticity_defect(h);
  if (!(defect <= tol.structure_tol)) {
    throw PreconditionError(
        fmt::format("{} is not Hermitian (||H - H^dagger||_F = {:.3e})", what, defect));
  }
  return matkit::hermitian_part(h);
}

ComplexMatrix lambda_matrix(const LambdaHamiltonian& p) {
  ComplexVector bright(3);
  bright << std::conj(p.omega1), std::conj(p.omega2), 0.0;
  ComplexVector excited = ComplexVector::Zero(3);
  excited(2) = 1.0;
  ComplexMatrix h = p.omega0 * (excited * bright.adjoint() + bright * excited.adjoint());
  h(2, 2) += 2.0 * p.delta;
  return h;
}

ComplexMatrix sample_linear(const SampledHamiltonian& s, double t) {
  const auto times = s.grid.times();
  if (!(t >= times.front() && t <= times.back())) {
    throw PreconditionError(
        fmt::format("sampled Hamiltonian queried at t = {} outside [0, {}]", t, times.back()));
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.end()) return s.samples.back();
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * s.samples[lo] + w * s.samples[hi];
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw PreconditionError("time grid needs at least 2 points");
  if (times_.front() != 0.0) throw PreconditionError("time grid must start at 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!std::isfinite(times_[k]) || !(times_[k] > times_[k - 1])) {
      throw PreconditionError(fmt::format("time grid not strictly increasing at index {}", k));
    }
  }
}

TimeGrid TimeGrid::uniform(double tau, std::size_t steps) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw PreconditionError("tau must be positive");
  if (steps < 1) throw PreconditionError("at least one step required");
  std::vector<double> times(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    times[k] = tau * static_cast<double>(k) / static_cast<double>(steps);
  }
  times.back() = tau;
  return TimeGrid(std::move(times));
}

HamiltonianSpec HamiltonianSpec::constant(ComplexMatrix h0, const Tolerances& tol) {
  h0 = checked_hermitian(h0, tol, "constant Hamiltonian");
  const Index n = h0.rows();
  return HamiltonianSpec(ConstantHamiltonian{std::move(h0)}, n);
}

HamiltonianSpec HamiltonianSpec::lambda(double omega0, double delta, Complex omega1,
                                        Complex omega2, const Tolerances& tol) {
  if (!std::isfinite(omega0) || !std::isfinite(delta)) {
    throw PreconditionError("Lambda parameters must be finite");
  }
  const double norm = std::norm(omega1) + std::norm(omega2);
  if (!(std::abs(norm - 1.0) <= tol.structure_tol)) {
    throw PreconditionError(
        fmt::format("Lambda laser parameters not normalized (|w1|^2 + |w2|^2 = {:.15g})", norm));
  }
  return HamiltonianSpec(LambdaHamiltonian{omega0, delta, omega1, omega2}, 3);
}

HamiltonianSpec HamiltonianSpec::sampled(TimeGrid grid, std::vector<ComplexMatrix> samples,
                                         const Tolerances& tol) {
  if (samples.size() != grid.size()) {
    throw PreconditionError(fmt::format("sampled Hamiltonian has {} samples for {} grid points",
                                        samples.size(), grid.size()));
  }
  const Index n = samples.front().rows();
  for (auto& s : samples) {
    s = checked_hermitian(s, tol, "sampled Hamiltonian");
    if (s.rows() != n) throw PreconditionError("sampled Hamiltonian dimension changes over time");
  }
  return HamiltonianSpec(SampledHamiltonian{std::move(grid), std::move(samples)}, n);
}

HamiltonianSpec HamiltonianSpec::driven(ComplexMatrix h0, ComplexMatrix h1, double frequency,
                                        const Tolerances& tol) {
  h0 = checked_hermitian(h0, tol, "driven Hamiltonian H0");
  h1 = checked_hermitian(h1, tol, "driven Hamiltonian H1");
  if (h0.rows() != h1.rows()) throw PreconditionError("driven Hamiltonian: H0/H1 dimension mismatch");
  if (!std::isfinite(frequency)) throw PreconditionError("driven Hamiltonian: frequency not finite");
  const Index n = h0.rows();
  return HamiltonianSpec(DrivenHamiltonian{std::move(h0), std::move(h1), frequency}, n);
}

FramePath::FramePath(TimeGrid grid, std::vector<ComplexMatrix> frames, const Tolerances& tol)
    : grid_(std::move(grid)), frames_(std::move(frames)) {
  if (frames_.size() != grid_.size()) {
    throw PreconditionError(
        fmt::format("frame path has {} frames for {} grid points", frames_.size(), grid_.size()));
  }
  const Index n = frames_.front().rows();
  const Index m = frames_.front().cols();
  if (m < 1 || m > n) throw PreconditionError("frame must be N x M with 1 <= M <= N");
  for (std::size_t k = 0; k < frames_.size(); ++k) {
    if (frames_[k].rows() != n || frames_[k].cols() != m) {
      throw PreconditionError(fmt::format("frame shape changes at grid index {}", k));
    }
    const double defect = matkit::isometry_defect(frames_[k]);
    if (!(defect <= 10.0 * tol.structure_tol)) {
      throw PreconditionError(fmt::format(
          "frame at grid index {} is not orthonormal (||F^dagger F - I||_F = {:.3e})", k, defect));
    }
  }
}

ComplexMatrix sample_hamiltonian(const HamiltonianSpec& spec, double t) {
  return std::visit(
      [t](const auto& m) -> ComplexMatrix {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantHamiltonian>) {
          return m.h0;
        } else if constexpr (std::is_same_v<T, LambdaHamiltonian>) {
          return lambda_matrix(m);
        } else if constexpr (std::is_same_v<T, SampledHamiltonian>) {
          return sample_linear(m, t);
        } else {
          return m.h0 + std::cos(m.frequency * t) * m.h1;
        }
      },
      spec.model());
}

HamiltonianFn as_function(const HamiltonianSpec& spec) {
  return [spec](double t) { return sample_hamiltonian(spec, t); };
}

FramePath propagate_frame(const HamiltonianSpec& spec, const ComplexMatrix& psi0,
                          const TimeGrid& grid, const Tolerances& tol) {
  return propagate_frame(as_function(spec), spec.dimension(), psi0, grid, tol);
}

FramePath propagate_frame(const HamiltonianFn& hamiltonian, Index dimension,
                          const ComplexMatrix& psi0, const TimeGrid& grid,
                          const Tolerances& tol) {
  if (psi0.rows() != dimension) {
    throw PreconditionError(fmt::format("initial frame has {} rows, Hamiltonian dimension is {}",
                                        psi0.rows(), dimension));
  }
  const double defect = matkit::isometry_defect(psi0);
  if (!(defect <= 10.0 * tol.structure_tol)) {
    throw PreconditionError(
        fmt::format("initial frame is not orthonormal (||S^dagger S - I||_F = {:.3e})", defect));
  }
  std::vector<ComplexMatrix> frames;
  frames.reserve(grid.size());
  frames.push_back(psi0);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double dt = grid[k + 1] - grid[k];
    const double mid = 0.5 * (grid[k] + grid[k + 1]);
    const ComplexMatrix step = matkit::expm_skew(-kI * hamiltonian(mid) * dt, tol);
    frames.push_back(matkit::lowdin_orthonormalize(step * frames.back()));
  }
  return FramePath(grid, std::move(frames), tol);
}

std::vector<ComplexMatrix> projector_path(const FramePath& path) {
  std::vector<ComplexMatrix> out;
  out.reserve(path.size());
  for (const auto& s : path.frames()) out.push_back(s * s.adjoint());
  return out;
}

ComplexMatrix restricted_generator(const HamiltonianSpec& spec, const FramePath& path,
                                   std::size_t k) {
  if (k >= path.size()) throw PreconditionError(fmt::format("grid index {} out of range", k));
  if (spec.dimension() != path.dimension()) {
    throw PreconditionError("restricted_generator: Hamiltonian/frame dimension mismatch");
  }
  const ComplexMatrix& s = path[k];
  return matkit::anti_hermitian_part(-kI * (s.adjoint() * sample_hamiltonian(spec, path.grid()[k]) * s));
}

std::vector<ComplexMatrix> differentiate_path(const TimeGrid& grid,
                                              std::span<const ComplexMatrix> values) {
  const std::size_t n = grid.size();
  if (n < 3) throw PreconditionError("finite differences need at least 3 grid points");
  if (values.size() != n) throw PreconditionError("path length does not match grid");
  // Three-point Lagrange weights on (x0, x1, x2), derivative evaluated at x0, x1 or x2.
  auto derivative = [&](std::size_t i0, int at) -> ComplexMatrix {
    const double h1 = grid[i0 + 1] - grid[i0];
    const double h2 = grid[i0 + 2] - grid[i0 + 1];
    const double s = h1 + h2;
    double w0 = 0.0, w1 = 0.0, w2 = 0.0;
    if (at == 0) {
      w0 = -(2.0 * h1 + h2) / (h1 * s);
      w1 = s / (h1 * h2);
      w2 = -h1 / (h2 * s);
    } else if (at == 1) {
      w0 = -h2 / (h1 * s);
      w1 = (h2 - h1) / (h1 * h2);
      w2 = h1 / (h2 * s);
    } else {
      w0 = h2 / (h1 * s);
      w1 = -s / (h1 * h2);
      w2 = (2.0 * h2 + h1) / (h2 * s);
    }
    return w0 * values[i0] + w1 * values[i0 + 1] + w2 * values[i0 + 2];
  };
  std::vector<ComplexMatrix> out;
  out.reserve(n);
  out.push_back(derivative(0, 0));
  for (std::size_t k = 1; k + 1 < n; ++k) out.push_back(derivative(k - 1, 1));
  out.push_back(derivative(n - 3, 2));
  return out;
}

}  // namespace holosep
