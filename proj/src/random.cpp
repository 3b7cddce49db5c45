#include "holosep/random.hpp"

#include <cmath>
#include <numbers>

namespace holosep::random {

namespace {

ComplexMatrix gaussian(Index rows, Index cols, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace

ComplexMatrix hermitian(Index n, Engine& rng, double scale) {
  const ComplexMatrix g = gaussian(n, n, rng);
  ComplexMatrix h = matkit::hermitian_part(g);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
  const double radius = eig.eigenvalues().cwiseAbs().maxCoeff();
  return matkit::hermitian_part(h * (scale / radius));
}

ComplexMatrix unitary(Index n, Engine& rng) {
  const ComplexMatrix g = gaussian(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return matkit::lowdin_orthonormalize(q);
}

ComplexMatrix frame(Index n, Index m, Engine& rng) { return unitary(n, rng).leftCols(m); }

ComplexMatrix anti_hermitian(Index n, Engine& rng) {
  const ComplexMatrix a = matkit::anti_hermitian_part(gaussian(n, n, rng));
  return a / a.norm();
}

std::vector<ComplexMatrix> closed_gauge(const TimeGrid& grid, Index m, Engine& rng,
                                        double amplitude) {
  const ComplexMatrix base = unitary(m, rng);
  const ComplexMatrix generator = anti_hermitian(m, rng);
  std::vector<ComplexMatrix> out;
  out.reserve(grid.size());
  const double tau = grid.tau();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = k + 1 == grid.size() ? 0.0 : amplitude * std::sin(std::numbers::pi * grid[k] / tau);
    out.push_back(base * matkit::expm_skew(s * generator));
  }
  return out;
}

}  // namespace holosep::random
