#include "ntucker/tucker.hpp"

#include "ntucker/error.hpp"

namespace ntucker {

std::vector<Index> TuckerTensor::ranks() const { return core.shape().dims(); }

Shape TuckerTensor::ambient_shape() const {
  std::vector<Index> dims;
  dims.reserve(factors.size());
  for (const Matrix& u : factors) dims.push_back(u.rows());
  return Shape(std::move(dims));
}

DenseTensor TuckerTensor::dense() const { return multi_mode_product(core, factor_ptrs(factors)); }

double orthonormality_defect(const Matrix& u) {
  if (u.cols() == 0) return 0.0;
  Matrix g = u.adjoint() * u;
  g -= Matrix::Identity(u.cols(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

void TuckerTensor::validate(double ortho_tol) const {
  require(core.order() == order() && order() >= 1, ErrorCode::shape_mismatch,
          "Tucker tensor needs one factor per core mode");
  Index total = core.numel();
  for (Index i = 0; i < order(); ++i) {
    const Matrix& u = factors[static_cast<std::size_t>(i)];
    const Index r = core.shape()[i];
    require(u.cols() == r, ErrorCode::shape_mismatch,
            "factor " + std::to_string(i) + " has " + std::to_string(u.cols()) +
                " columns but the core rank is " + std::to_string(r));
    require(r <= u.rows(), ErrorCode::invalid_argument,
            "rank " + std::to_string(r) + " exceeds extent " + std::to_string(u.rows()) +
                " in mode " + std::to_string(i));
    require(r <= total / r, ErrorCode::invalid_argument,
            "multilinear rank infeasible in mode " + std::to_string(i));
    const double defect = orthonormality_defect(u);
    require(defect <= ortho_tol, ErrorCode::contract_violation,
            "factor " + std::to_string(i) + " is not orthonormal (defect " + std::to_string(defect) +
                ")");
  }
}

std::vector<const Matrix*> factor_ptrs(const std::vector<Matrix>& factors) {
  std::vector<const Matrix*> p;
  p.reserve(factors.size());
  for (const Matrix& u : factors) p.push_back(&u);
  return p;
}

}  // namespace ntucker
