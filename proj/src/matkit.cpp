#include "holosep/matkit.hpp"

#include <cmath>

#include <fmt/format.h>

#include "holosep/errors.hpp"

namespace holosep {

void Tolerances::validate() const {
  for (double v : {structure_tol, positivity_tol, separation_tol}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw PreconditionError(fmt::format("tolerances must be finite and non-negative (got {})", v));
    }
  }
}

namespace matkit {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix dagger(const ComplexMatrix& m) { return m.adjoint(); }

bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

double hermiticity_defect(const ComplexMatrix& m) { return (m - m.adjoint()).norm(); }

double anti_hermiticity_defect(const ComplexMatrix& m) { return (m + m.adjoint()).norm(); }

double isometry_defect(const ComplexMatrix& m) {
  return (m.adjoint() * m - ComplexMatrix::Identity(m.cols(), m.cols())).norm();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix anti_hermitian_part(const ComplexMatrix& m) { return 0.5 * (m - m.adjoint()); }

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw PreconditionError(fmt::format("{} must be a non-empty square matrix (got {}x{})", what,
                                        m.rows(), m.cols()));
  }
}

ComplexMatrix expm_skew(const ComplexMatrix& x, const Tolerances& tol) {
  require_square(x, "expm_skew argument");
  const double defect = anti_hermiticity_defect(x);
  if (!(defect <= tol.structure_tol)) {
    throw PreconditionError(
        fmt::format("expm_skew: argument is not anti-Hermitian (||X + X^dagger||_F = {:.3e})", defect));
  }
  // iX is Hermitian; exp(X) = exp(-i (iX)).
  const ComplexMatrix h = hermitian_part(kI * x);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  if (eig.info() != Eigen::Success) {
    throw PreconditionError("expm_skew: eigendecomposition failed");
  }
  const Eigen::VectorXd& d = eig.eigenvalues();
  ComplexVector phases(d.size());
  for (Index k = 0; k < d.size(); ++k) phases(k) = std::exp(-kI * d(k));
  const ComplexMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

PolarParts polar_decompose(const ComplexMatrix& u) {
  require_square(u, "polar_decompose argument");
  if (!all_finite(u)) throw PreconditionError("polar_decompose: non-finite entries");
  Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw PreconditionError("polar_decompose: singular value decomposition failed");
  }
  const ComplexMatrix& left = svd.matrixU();
  const ComplexMatrix& right = svd.matrixV();
  const ComplexVector sigma = svd.singularValues().cast<Complex>();
  PolarParts parts;
  parts.positive = hermitian_part(left * sigma.asDiagonal() * left.adjoint());
  parts.unitary = left * right.adjoint();
  return parts;
}

double min_eigenvalue_hermitian(const ComplexMatrix& o, const Tolerances& tol) {
  require_square(o, "min_eigenvalue_hermitian argument");
  const double defect = hermiticity_defect(o);
  if (!(defect <= tol.structure_tol)) {
    throw PreconditionError(
        fmt::format("min_eigenvalue_hermitian: matrix is not Hermitian (||O - O^dagger||_F = {:.3e})",
                    defect));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian_part(o), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator_norm first argument");
  require_square(b, "commutator_norm second argument");
  if (a.rows() != b.rows()) {
    throw PreconditionError(
        fmt::format("commutator_norm: dimension mismatch ({} vs {})", a.rows(), b.rows()));
  }
  return (a * b - b * a).norm();
}

ComplexMatrix lowdin_orthonormalize(const ComplexMatrix& frame) {
  const ComplexMatrix gram = hermitian_part(frame.adjoint() * frame);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram);
  const Eigen::VectorXd& d = eig.eigenvalues();
  if (eig.info() != Eigen::Success || d.minCoeff() <= 0.0) {
    throw PreconditionError("lowdin_orthonormalize: frame columns are linearly dependent");
  }
  ComplexVector inv_sqrt(d.size());
  for (Index k = 0; k < d.size(); ++k) inv_sqrt(k) = 1.0 / std::sqrt(d(k));
  const ComplexMatrix& v = eig.eigenvectors();
  return frame * (v * inv_sqrt.asDiagonal() * v.adjoint());
}

}  // namespace matkit
}  // namespace holosep
