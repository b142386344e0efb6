#include "ntucker/ksl.hpp"

#include "ntucker/error.hpp"
#include "ntucker/linalg.hpp"
#include "ntucker/rk4.hpp"
#include "ntucker/tucker.hpp"

namespace ntucker {

std::string describe(const SubstepSolver& solver) {
  if (std::holds_alternative<ExactIncrement>(solver)) return "exact-increment";
  return "rk4x" + std::to_string(std::get<Rk4>(solver).inner_steps);
}

SubstepSystem reversed(SubstepSystem system) {
  SubstepSystem out;
  if (system.rate)
    out.rate = [rate = std::move(system.rate)](double t, const Matrix& z) -> Matrix { return -rate(t, z); };
  if (system.increment)
    out.increment = [inc = std::move(system.increment)](double a, double b) -> Matrix { return -inc(a, b); };
  return out;
}

Matrix solve_substep(const SubstepSystem& system, const Matrix& z0, double t0, double t1,
                     const SubstepSolver& solver) {
  require(t1 > t0, ErrorCode::invalid_argument, "substep needs t1 > t0");
  if (std::holds_alternative<ExactIncrement>(solver)) {
    require(static_cast<bool>(system.increment), ErrorCode::contract_violation,
            "exact-increment substeps need an explicitly given path");
    Matrix z = z0;
    z += system.increment(t0, t1);
    return z;
  }
  const auto steps = std::get<Rk4>(solver).inner_steps;
  require(steps >= 1, ErrorCode::invalid_argument, "RK4 needs at least one inner step");
  require(static_cast<bool>(system.rate), ErrorCode::contract_violation,
          "RK4 substeps need a field that can be evaluated");
  return rk4_integrate(system.rate, z0, t0, t1, steps);
}

namespace {

// Evaluator of F(t, Y) and of the increment A(t1) - A(t0).
struct MatrixFieldAccess {
  std::function<Matrix(double, const Matrix&)> eval;
  std::function<Matrix(double, double)> delta;
};

MatrixFieldAccess access(const MatrixField& field) {
  MatrixFieldAccess a;
  if (const auto* bb = std::get_if<MatrixBlackBox>(&field)) {
    a.eval = bb->f;
    return a;
  }
  const auto& path = std::get<MatrixPath>(field);
  if (path.derivative)
    a.eval = [d = path.derivative](double t, const Matrix&) { return d(t); };
  a.delta = [v = path.value](double t0, double t1) -> Matrix { return v(t1) - v(t0); };
  return a;
}

}  // namespace

LowRankMatrixState ksl_matrix_step(const LowRankMatrixState& state, const MatrixField& field,
                                   double t0, double t1, const SubstepSolver& solver) {
  require(t1 > t0, ErrorCode::invalid_argument, "ksl_matrix_step needs t1 > t0");
  require(state.S.rows() == state.S.cols() && state.U.cols() == state.S.rows() &&
              state.V.cols() == state.S.cols(),
          ErrorCode::shape_mismatch, "ksl_matrix_step: inconsistent factor sizes");
  require(orthonormality_defect(state.U) <= 1e-12 && orthonormality_defect(state.V) <= 1e-12,
          ErrorCode::contract_violation, "ksl_matrix_step: factors are not orthonormal");
  if (std::holds_alternative<ExactIncrement>(solver))
    require(std::holds_alternative<MatrixPath>(field), ErrorCode::contract_violation,
            "exact-increment substeps need an explicitly given path");

  const MatrixFieldAccess F = access(field);
  // The increment is shared by all three substeps.
  Matrix delta;
  if (F.delta && std::holds_alternative<ExactIncrement>(solver)) delta = F.delta(t0, t1);

  const Matrix& V0 = state.V;

  // K-step: K̇ = F(t, K V0ᴴ) V0, K(t0) = U0 S0.
  SubstepSystem k_sys;
  if (F.eval) k_sys.rate = [&](double t, const Matrix& k) -> Matrix { return F.eval(t, k * V0.adjoint()) * V0; };
  if (delta.size()) k_sys.increment = [&](double, double) -> Matrix { return delta * V0; };
  const Matrix k1 = solve_substep(k_sys, state.U * state.S, t0, t1, solver);
  QRFactors kqr = qr_thin(k1);
  const Matrix& U1 = kqr.Q;

  // S-step, integrated backward: Ṡ = -U1ᴴ F(t, U1 S V0ᴴ) V0.
  SubstepSystem s_sys;
  if (F.eval)
    s_sys.rate = [&](double t, const Matrix& s) -> Matrix {
      return U1.adjoint() * F.eval(t, U1 * s * V0.adjoint()) * V0;
    };
  if (delta.size()) s_sys.increment = [&](double, double) -> Matrix { return U1.adjoint() * delta * V0; };
  const Matrix s_tilde = solve_substep(reversed(std::move(s_sys)), kqr.R, t0, t1, solver);

  // L-step on X = Lᴴ: Ẋ = U1ᴴ F(t, U1 X), X(t0) = S̃ V0ᴴ.
  SubstepSystem l_sys;
  if (F.eval) l_sys.rate = [&](double t, const Matrix& x) -> Matrix { return U1.adjoint() * F.eval(t, U1 * x); };
  if (delta.size()) l_sys.increment = [&](double, double) -> Matrix { return U1.adjoint() * delta; };
  const Matrix x1 = solve_substep(l_sys, s_tilde * V0.adjoint(), t0, t1, solver);
  QRFactors lqr = qr_thin(x1.adjoint());

  return {U1, lqr.R.adjoint(), lqr.Q};
}

}  // namespace ntucker
