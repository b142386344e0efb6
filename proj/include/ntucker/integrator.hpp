#pragma once

// One-step and multi-step integrators for rank-constrained Tucker tensors.

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "ntucker/ksl.hpp"
#include "ntucker/tensor.hpp"
#include "ntucker/tucker.hpp"

namespace ntucker {

// F(t, Y) evaluated on full tensors of the ambient shape.
struct TensorBlackBox {
  std::function<DenseTensor(double, const DenseTensor&)> f;
};

// Explicit path A(t) with F(t, Y) = Ȧ(t). `increment` overrides
// value(t1) - value(t0) when the caller can form it more accurately;
// `derivative` enables RK4 substeps.
struct TensorPath {
  std::function<DenseTensor(double)> value;
  std::function<DenseTensor(double)> derivative;
  std::function<DenseTensor(double, double)> increment;
};

using TensorField = std::variant<TensorBlackBox, TensorPath>;

struct StepConfig {
  double h = 0.1;
  SubstepSolver solver = Rk4{1};
  double ortho_tol = 1e-12;
};

enum class Method { nested, classic };

// Nested Tucker integrator: for each mode a K-step and a backward S-step on
// the partially reduced problem, then one core step.
TuckerTensor nested_step(const TuckerTensor& y0, const TensorField& field, double t0, double t1,
                         const StepConfig& cfg);

// Tucker projector-splitting integrator working with the mixed old/new bases
// in the full ambient space.
TuckerTensor classic_step(const TuckerTensor& y0, const TensorField& field, double t0, double t1,
                          const StepConfig& cfg);

struct StepRecord {
  double t;
  double norm;
};

// n_steps equal steps from t0 to t_end. If `log` is given it receives the
// Frobenius norm after every step.
TuckerTensor integrate(const TuckerTensor& y0, const TensorField& field, double t0, double t_end,
                       std::int64_t n_steps, const StepConfig& cfg, Method method,
                       std::vector<StepRecord>* log = nullptr);

// Tangent vector at `base` in gauged form (U_iᴴ δU_i = 0).
struct TangentTensor {
  TuckerTensor base;
  DenseTensor delta_core;
  std::vector<Matrix> delta_factors;

  // δC ×_k U_k + Σ_i C ×_i δU_i ×_{k≠i} U_k
  DenseTensor dense() const;
  // max |U_iᴴ δU_i|
  double gauge_defect() const;
};

// Orthogonal projection of z onto the tangent space at y. Throws if a core
// unfolding is rank deficient (singular values below 1e-12 σ_max).
TangentTensor tangent_project(const TuckerTensor& y, const DenseTensor& z);

TangentTensor random_tangent(const TuckerTensor& y, double target_norm, std::uint64_t seed);

}  // namespace ntucker
