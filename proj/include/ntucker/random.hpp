#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "ntucker/tensor.hpp"
#include "ntucker/tucker.hpp"

namespace ntucker {

// All randomness flows through std::mt19937_64 seeded explicitly; complex
// samples have independent standard normal real and imaginary parts.
using Rng = std::mt19937_64;

Matrix random_matrix(Rng& rng, Index rows, Index cols);
DenseTensor random_tensor(Rng& rng, const Shape& shape);
// Q factor of a random Gaussian matrix.
Matrix random_orthonormal(Rng& rng, Index rows, Index cols);
// Random core and random orthonormal factors.
TuckerTensor random_tucker(Rng& rng, const Shape& shape, std::span<const Index> ranks);

}  // namespace ntucker
