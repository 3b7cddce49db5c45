#pragma once

#include <complex>

#include <Eigen/Dense>

namespace holosep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

struct Tolerances {
  double structure_tol = 1e-10;   // Hermiticity / unitarity residuals
  double positivity_tol = 1e-9;   // in-phase minimum eigenvalue
  double separation_tol = 1e-6;   // classification threshold

  // Throws PreconditionError if any tolerance is negative or not finite.
  void validate() const;
};

namespace matkit {

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

ComplexMatrix dagger(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

// ||m - m^dagger||_F
double hermiticity_defect(const ComplexMatrix& m);
// ||m + m^dagger||_F
double anti_hermiticity_defect(const ComplexMatrix& m);
// ||m^dagger m - I||_F
double isometry_defect(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);
ComplexMatrix anti_hermitian_part(const ComplexMatrix& m);

/// exp(X) for anti-Hermitian X.
///
/// Computed by diagonalizing the Hermitian matrix iX = V diag(d) V^dagger, so
/// exp(X) = V diag(exp(-i d)) V^dagger is unitary to roundoff. X is
/// anti-Hermitian-symmetrized before use; a residual ||X + X^dagger||_F above
/// `tol.structure_tol` is rejected with PreconditionError.
ComplexMatrix expm_skew(const ComplexMatrix& x, const Tolerances& tol = {});

struct PolarParts {
  ComplexMatrix positive;  // Hermitian positive semidefinite, left factor
  ComplexMatrix unitary;
};

/// Left polar decomposition U = P Q from the SVD U = X S Y^dagger:
/// P = X S X^dagger, Q = X Y^dagger.
PolarParts polar_decompose(const ComplexMatrix& u);

// Smallest eigenvalue of (O + O^dagger)/2; O must be Hermitian within tolerance.
double min_eigenvalue_hermitian(const ComplexMatrix& o, const Tolerances& tol = {});

// ||AB - BA||_F
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

// Symmetric (Loewdin) orthonormalization F (F^dagger F)^{-1/2}.
ComplexMatrix lowdin_orthonormalize(const ComplexMatrix& frame);

void require_square(const ComplexMatrix& m, const char* what);

}  // namespace matkit
}  // namespace holosep
