#pragma once

#include <span>

#include "ntucker/tensor.hpp"
#include "ntucker/tucker.hpp"

namespace ntucker {

struct QRFactors {
  Matrix Q;  // n×r, orthonormal columns
  Matrix R;  // r×r, upper triangular, real nonnegative diagonal
};

struct SVDFactors {
  Matrix U;               // m×k, orthonormal
  Eigen::VectorXd sigma;  // k = min(m, n), nonincreasing
  Matrix V;               // n×k, orthonormal
};

// Householder QR of a tall matrix (rows >= cols). The diagonal of R is made
// real and nonnegative, which fixes the factorization for full-rank input.
QRFactors qr_thin(const Matrix& a);

// Thin SVD by one-sided (Hestenes) Jacobi. Tall inputs are first reduced by
// qr_thin; wide inputs are handled through the adjoint. Singular vectors that
// belong to zero singular values are completed to an orthonormal set.
SVDFactors svd_thin(const Matrix& a);

// Truncated HOSVD: U_i = leading ranks[i] left singular vectors of the mode-i
// unfolding, core = X ×_i U_iᴴ.
TuckerTensor hosvd_truncate(const DenseTensor& x, std::span<const Index> ranks);

// Moore-Penrose pseudoinverse via svd_thin; singular values below
// rel_tol * sigma_max are dropped. `rank` receives the retained count.
Matrix pseudoinverse(const Matrix& a, double rel_tol, Index* rank = nullptr);

}  // namespace ntucker
