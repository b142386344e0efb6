#pragma once

// Matrix projector-splitting (K, S, L) integrator and the substep engine the
// Tucker integrators share.

#include <cstdint>
#include <functional>
#include <variant>

#include "ntucker/tensor.hpp"

namespace ntucker {

// Substeps are solved from the increment of an explicitly given path.
struct ExactIncrement {};

// Substeps are solved with `inner_steps` classical RK4 steps.
struct Rk4 {
  std::int64_t inner_steps = 1;
};

using SubstepSolver = std::variant<ExactIncrement, Rk4>;

std::string describe(const SubstepSolver& solver);

// Right-hand side of one substep ODE Ż = rate(t, Z). For explicitly given
// paths, `increment(t0, t1)` returns the exact change ∫ rate dt instead.
struct SubstepSystem {
  std::function<Matrix(double, const Matrix&)> rate;
  std::function<Matrix(double, double)> increment;
};

// Same system integrated backward: both rate and increment negated.
SubstepSystem reversed(SubstepSystem system);

Matrix solve_substep(const SubstepSystem& system, const Matrix& z0, double t0, double t1,
                     const SubstepSolver& solver);

struct LowRankMatrixState {
  Matrix U;  // n1×r, orthonormal
  Matrix S;  // r×r
  Matrix V;  // n2×r, orthonormal

  Matrix dense() const { return U * S * V.adjoint(); }
};

// F(t, Y) evaluated on full matrices.
struct MatrixBlackBox {
  std::function<Matrix(double, const Matrix&)> f;
};

// Explicit path A(t); F(t, Y) = Ȧ(t). `derivative` is only needed for RK4
// substeps; ExactIncrement uses A(t1) - A(t0).
struct MatrixPath {
  std::function<Matrix(double)> value;
  std::function<Matrix(double)> derivative;
};

using MatrixField = std::variant<MatrixBlackBox, MatrixPath>;

// One K-S-L step from t0 to t1.
LowRankMatrixState ksl_matrix_step(const LowRankMatrixState& state, const MatrixField& field,
                                   double t0, double t1, const SubstepSolver& solver);

}  // namespace ntucker
