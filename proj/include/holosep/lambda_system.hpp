#pragma once

#include <array>
#include <optional>
#include <vector>

#include "holosep/frames.hpp"

// Closed-form results for the three-level Lambda system driven by a square pulse
// pair, used as oracles for the numerical pipeline. Basis order {|1>, |2>, |3>}.
namespace holosep::lambda {

struct LambdaParams {
  double omega0 = 1.0;          // Rabi amplitude
  double delta = 0.0;           // common detuning
  Complex omega1{1.0, 0.0};
  Complex omega2{0.0, 0.0};
  double tau = 1.0;             // pulse duration
  double eta = 0.0;             // mixing angle of the second case-(iii) frame vector

  void validate(const Tolerances& tol = {}) const;
  // atan2(omega0, delta), in (0, pi) for omega0 > 0.
  double gamma() const;
  // sqrt(delta^2 + omega0^2)
  double phidot() const;
  // phidot * t
  double precession_angle(double t) const { return phidot() * t; }
};

ComplexVector excited_state();
// |b> = conj(omega1)|1> + conj(omega2)|2>
ComplexVector bright_state(const LambdaParams& p);
// |d> = -omega2|1> + omega1|2>
ComplexVector dark_state(const LambdaParams& p);

HamiltonianSpec lambda_spec(const LambdaParams& p, const Tolerances& tol = {});
ComplexMatrix lambda_hamiltonian(const LambdaParams& p);

struct Eigensystem {
  double gamma = 0.0;
  double phidot = 0.0;
  std::array<double, 3> energies{};       // {0, delta + phidot, delta - phidot}
  std::array<ComplexVector, 3> vectors;   // {|d>, |v1>, |v2>}
};

Eigensystem eigensystem(const LambdaParams& p);

// U(tau, 0) = exp(-i delta tau) exp(-i phi_tau (sin(gamma) X + cos(gamma) Z)) on {|3>, |b>}.
ComplexMatrix case_i_analytic(const LambdaParams& p);

struct CaseIIResult {
  ComplexMatrix overlap;  // O(0, tau)
  ComplexMatrix w;        // W(tau)
};

// Dark/bright frame with the phase-anchored bright column.
CaseIIResult case_ii_analytic(const LambdaParams& p, const Tolerances& tol = {});

struct CaseIIIResult {
  std::vector<double> times;
  std::vector<Complex> a22;                // A_22(t)
  std::vector<Complex> k22;                // K_22(t) = -i (delta + phidot cos(eta))
  std::vector<std::optional<double>> g;    // K_22 / A_22 where A_22 does not vanish
  ComplexMatrix overlap;                   // O(0, tau)
  ComplexMatrix holonomic;                 // exp(int A)
  ComplexMatrix dynamical;                 // exp(int K)
  ComplexMatrix w;                         // holonomic * dynamical
};

CaseIIIResult case_iii_analytic(const LambdaParams& p, const TimeGrid& grid);

// g(t) = K_22(t) / A_22(t); throws PreconditionError where A_22 vanishes.
double case_iii_g(const LambdaParams& p, double t);

enum class Case { i, ii, iii };

struct CaseSetup {
  HamiltonianSpec spec;
  ComplexMatrix psi0;  // 3 x 2
  SectionRule rule;
};

CaseSetup case_setup(Case which, const LambdaParams& p, const Tolerances& tol = {});

// Matrix of sum_jk |psi_j(0)> U_jk <psi_k(0)| on span{|1>, |2>} for a dark/bright frame.
ComplexMatrix to_ground_basis(const LambdaParams& p, const ComplexMatrix& u);

}  // namespace holosep::lambda
