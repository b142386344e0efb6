#include "ntucker/error.hpp"
#include "ntucker/integrator.hpp"
#include "ntucker/linalg.hpp"
#include "ntucker/random.hpp"

namespace ntucker {

namespace {

constexpr double kPinvTol = 1e-12;

// Z ×_{k≠i} U_kᴴ
DenseTensor project_except(const DenseTensor& z, const std::vector<Matrix>& factors, Index i) {
  std::vector<const Matrix*> ops = factor_ptrs(factors);
  ops[static_cast<std::size_t>(i)] = nullptr;
  return multi_mode_product_adjoint(z, ops);
}

}  // namespace

DenseTensor TangentTensor::dense() const {
  const std::vector<const Matrix*> all = factor_ptrs(base.factors);
  DenseTensor out = multi_mode_product(delta_core, all);
  for (std::size_t i = 0; i < delta_factors.size(); ++i) {
    std::vector<const Matrix*> ops = all;
    ops[i] = &delta_factors[i];
    out += multi_mode_product(base.core, ops);
  }
  return out;
}

double TangentTensor::gauge_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < delta_factors.size(); ++i) {
    const Matrix g = base.factors[i].adjoint() * delta_factors[i];
    if (g.size()) worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return worst;
}

TangentTensor tangent_project(const TuckerTensor& y, const DenseTensor& z) {
  y.validate();
  require(z.shape() == y.ambient_shape(), ErrorCode::shape_mismatch,
          "tangent_project: tensor shape " + to_string(z.shape()) + " does not match " +
              to_string(y.ambient_shape()));
  TangentTensor t;
  t.base = y;
  t.delta_core = multi_mode_product_adjoint(z, factor_ptrs(y.factors));
  for (Index i = 0; i < y.order(); ++i) {
    const Matrix& u = y.factors[static_cast<std::size_t>(i)];
    Index rank = 0;
    const Matrix cpinv = pseudoinverse(matricize(y.core, i), kPinvTol, &rank);
    require(rank == u.cols(), ErrorCode::numerical,
            "tangent_project: core unfolding in mode " + std::to_string(i) +
                " is rank deficient; the projection is undefined there");
    Matrix m = matricize(project_except(z, y.factors, i), i);
    m -= u * (u.adjoint() * m);
    t.delta_factors.push_back(m * cpinv);
  }
  return t;
}

TangentTensor random_tangent(const TuckerTensor& y, double target_norm, std::uint64_t seed) {
  require(target_norm >= 0.0, ErrorCode::invalid_argument, "target norm must be nonnegative");
  y.validate();
  Rng rng(seed);
  TangentTensor t;
  t.base = y;
  t.delta_core = random_tensor(rng, y.core.shape());
  // Components along different modes are mutually orthogonal, so the norm of
  // the dense value is assembled blockwise.
  double norm2 = t.delta_core.vec().squaredNorm();
  for (Index i = 0; i < y.order(); ++i) {
    const Matrix& u = y.factors[static_cast<std::size_t>(i)];
    Matrix g = random_matrix(rng, u.rows(), u.cols());
    g -= u * (u.adjoint() * g);
    g -= u * (u.adjoint() * g);
    norm2 += (g * matricize(y.core, i)).squaredNorm();
    t.delta_factors.push_back(std::move(g));
  }
  const double scale = norm2 > 0.0 ? target_norm / std::sqrt(norm2) : 0.0;
  t.delta_core *= scale;
  for (Matrix& g : t.delta_factors) g *= scale;
  return t;
}

}  // namespace ntucker
