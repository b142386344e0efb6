#pragma once

#include <vector>

#include "ntucker/tensor.hpp"

namespace ntucker {

// Y = core ×_1 U_1 ... ×_d U_d with orthonormal factor columns.
struct TuckerTensor {
  DenseTensor core;
  std::vector<Matrix> factors;

  Index order() const { return static_cast<Index>(factors.size()); }
  std::vector<Index> ranks() const;
  Shape ambient_shape() const;

  DenseTensor dense() const;

  // Throws if factors are not orthonormal to `ortho_tol` (max-entry of
  // UᴴU - I), if extents disagree, or if a rank is infeasible.
  void validate(double ortho_tol = 1e-12) const;
};

// max |UᴴU - I|
double orthonormality_defect(const Matrix& u);

std::vector<const Matrix*> factor_ptrs(const std::vector<Matrix>& factors);

}  // namespace ntucker
