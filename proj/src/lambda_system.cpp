#include "holosep/lambda_system.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "holosep/errors.hpp"

namespace holosep::lambda {

namespace {

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

ComplexMatrix two_columns(const ComplexVector& first, const ComplexVector& second) {
  ComplexMatrix m(3, 2);
  m.col(0) = first;
  m.col(1) = second;
  return m;
}

}  // namespace

void LambdaParams::validate(const Tolerances& tol) const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw PreconditionError(fmt::format("omega0 must be positive (got {})", omega0));
  }
  if (!std::isfinite(delta)) throw PreconditionError("delta must be finite");
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw PreconditionError(fmt::format("tau must be positive (got {})", tau));
  }
  if (!(eta >= 0.0 && eta <= std::numbers::pi)) {
    throw PreconditionError(fmt::format("eta must lie in [0, pi] (got {})", eta));
  }
  const double norm = std::norm(omega1) + std::norm(omega2);
  if (!(std::abs(norm - 1.0) <= tol.structure_tol)) {
    throw PreconditionError(
        fmt::format("laser parameters not normalized (|w1|^2 + |w2|^2 = {:.15g})", norm));
  }
}

double LambdaParams::gamma() const { return std::atan2(omega0, delta); }

double LambdaParams::phidot() const { return std::hypot(delta, omega0); }

ComplexVector excited_state() {
  ComplexVector v = ComplexVector::Zero(3);
  v(2) = 1.0;
  return v;
}

ComplexVector bright_state(const LambdaParams& p) {
  ComplexVector v(3);
  v << std::conj(p.omega1), std::conj(p.omega2), 0.0;
  return v;
}

ComplexVector dark_state(const LambdaParams& p) {
  ComplexVector v(3);
  v << -p.omega2, p.omega1, 0.0;
  return v;
}

HamiltonianSpec lambda_spec(const LambdaParams& p, const Tolerances& tol) {
  p.validate(tol);
  return HamiltonianSpec::lambda(p.omega0, p.delta, p.omega1, p.omega2, tol);
}

ComplexMatrix lambda_hamiltonian(const LambdaParams& p) {
  return sample_hamiltonian(lambda_spec(p), 0.0);
}

Eigensystem eigensystem(const LambdaParams& p) {
  if (p.omega0 == 0.0 && p.delta == 0.0) {
    throw PreconditionError("mixing angle undefined for omega0 = delta = 0");
  }
  p.validate();
  Eigensystem out;
  out.gamma = p.gamma();
  out.phidot = p.phidot();
  out.energies = {0.0, p.delta + out.phidot, p.delta - out.phidot};
  const double c = std::cos(0.5 * out.gamma);
  const double s = std::sin(0.5 * out.gamma);
  const ComplexVector e3 = excited_state();
  const ComplexVector b = bright_state(p);
  out.vectors = {dark_state(p), ComplexVector(c * e3 + s * b), ComplexVector(-s * e3 + c * b)};
  return out;
}

ComplexMatrix case_i_analytic(const LambdaParams& p) {
  p.validate();
  const double gamma = p.gamma();
  const double phi = p.precession_angle(p.tau);
  // exp(-i phi n.sigma) = cos(phi) I - i sin(phi) n.sigma
  ComplexMatrix n_sigma(2, 2);
  n_sigma << std::cos(gamma), std::sin(gamma), std::sin(gamma), -std::cos(gamma);
  const ComplexMatrix rotation =
      std::cos(phi) * ComplexMatrix::Identity(2, 2) - kI * std::sin(phi) * n_sigma;
  return std::exp(-kI * p.delta * p.tau) * rotation;
}

CaseIIResult case_ii_analytic(const LambdaParams& p, const Tolerances& tol) {
  p.validate(tol);
  const double phi = p.precession_angle(p.tau);
  // <b| exp(-iH tau) |b>
  const Complex bracket = std::exp(-kI * p.delta * p.tau) *
                          Complex(std::cos(phi), std::cos(p.gamma()) * std::sin(phi));
  const double modulus = std::abs(bracket);
  if (!(modulus > tol.positivity_tol)) {
    throw PreconditionError(fmt::format(
        "case (ii) anchor overlap collapses (|<b|exp(-iH tau)|b>| = {:.3e})", modulus));
  }
  return {diag2(1.0, modulus), diag2(1.0, bracket / modulus)};
}

namespace {

struct CaseIIIPoint {
  Complex a22;
  Complex k22;
};

CaseIIIPoint case_iii_point(const LambdaParams& p, double t) {
  const double phidot = p.phidot();
  const double sin_phi = std::sin(p.precession_angle(t));
  const double sin_eta = std::sin(p.eta);
  const double cos_eta = std::cos(p.eta);
  const double denom = 1.0 - sin_eta * sin_eta * sin_phi * sin_phi;
  const double mean_energy = p.delta + phidot * cos_eta;
  const double a = denom > 0.0 ? -phidot * cos_eta * sin_eta * sin_eta * sin_phi * sin_phi / denom : 0.0;
  return {Complex(0.0, a), Complex(0.0, -mean_energy)};
}

}  // namespace

double case_iii_g(const LambdaParams& p, double t) {
  const CaseIIIPoint pt = case_iii_point(p, t);
  if (std::abs(pt.a22) <= 1e-14 * std::max(1.0, p.phidot())) {
    throw PreconditionError(fmt::format("g(t) undefined: A_22 vanishes at t = {}", t));
  }
  return (pt.k22 / pt.a22).real();
}

CaseIIIResult case_iii_analytic(const LambdaParams& p, const TimeGrid& grid) {
  p.validate();
  CaseIIIResult out;
  out.times.assign(grid.times().begin(), grid.times().end());
  for (double t : out.times) {
    const CaseIIIPoint pt = case_iii_point(p, t);
    out.a22.push_back(pt.a22);
    out.k22.push_back(pt.k22);
    if (std::abs(pt.a22) > 1e-14 * std::max(1.0, p.phidot())) {
      out.g.push_back((pt.k22 / pt.a22).real());
    } else {
      out.g.push_back(std::nullopt);
    }
  }
  const double tau = p.tau;
  const double phi = p.precession_angle(tau);
  // <psi_2(0)|psi_2(tau)> = exp(-i delta tau) (cos(phi) - i cos(eta) sin(phi))
  const Complex overlap = std::exp(-kI * p.delta * tau) *
                          Complex(std::cos(phi), -std::cos(p.eta) * std::sin(phi));
  const double modulus = std::abs(overlap);
  if (!(modulus > 0.0)) throw PreconditionError("case (iii) anchor overlap vanishes at tau");
  const Complex anchor = overlap / modulus;
  const double mean_energy = p.delta + p.phidot() * std::cos(p.eta);
  out.overlap = diag2(1.0, modulus);
  out.holonomic = diag2(1.0, anchor * std::exp(kI * mean_energy * tau));
  out.dynamical = diag2(1.0, std::exp(-kI * mean_energy * tau));
  out.w = out.holonomic * out.dynamical;
  return out;
}

CaseSetup case_setup(Case which, const LambdaParams& p, const Tolerances& tol) {
  HamiltonianSpec spec = lambda_spec(p, tol);
  switch (which) {
    case Case::i: {
      ComplexMatrix psi0 = two_columns(excited_state(), bright_state(p));
      return {std::move(spec), psi0, FixedSection{psi0}};
    }
    case Case::ii:
      return {std::move(spec), two_columns(dark_state(p), bright_state(p)), PhaseAnchoredSection{}};
    case Case::iii: {
      const Eigensystem es = eigensystem(p);
      const ComplexVector second =
          std::cos(0.5 * p.eta) * es.vectors[1] + std::sin(0.5 * p.eta) * es.vectors[2];
      return {std::move(spec), two_columns(es.vectors[0], second), PhaseAnchoredSection{}};
    }
  }
  throw PreconditionError("unknown Lambda case");
}

ComplexMatrix to_ground_basis(const LambdaParams& p, const ComplexMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw PreconditionError("to_ground_basis expects a 2x2 matrix");
  ComplexMatrix frame(2, 2);
  frame.col(0) = dark_state(p).head(2);
  frame.col(1) = bright_state(p).head(2);
  return frame * u * frame.adjoint();
}

}  // namespace holosep::lambda
