#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "holosep/dynamics.hpp"

// Seeded generators for randomized instances and gauges. All draws go through
// std::mt19937_64, so results are reproducible for a given seed and toolchain.
namespace holosep::random {

using Engine = std::mt19937_64;

// Hermitian with i.i.d. complex Gaussian entries, scaled to spectral norm `scale`.
ComplexMatrix hermitian(Index n, Engine& rng, double scale = 1.0);

// Haar-distributed unitary (QR of a complex Gaussian matrix with phase fix).
ComplexMatrix unitary(Index n, Engine& rng);

// First m columns of a Haar unitary.
ComplexMatrix frame(Index n, Index m, Engine& rng);

// Anti-Hermitian with unit Frobenius norm.
ComplexMatrix anti_hermitian(Index n, Engine& rng);

// V(t) = V0 exp(amplitude sin(pi t / tau) X): smooth, unitary, V(tau) = V(0).
std::vector<ComplexMatrix> closed_gauge(const TimeGrid& grid, Index m, Engine& rng,
                                        double amplitude = 1.0);

}  // namespace holosep::random
