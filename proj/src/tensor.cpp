#include "ntucker/tensor.hpp"

#include <limits>
#include <numeric>
#include <sstream>

#include "ntucker/error.hpp"

namespace ntucker {

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
  require(!dims_.empty(), ErrorCode::invalid_argument, "shape must have at least one mode");
  Index total = 1;
  for (Index n : dims_) {
    require(n >= 1, ErrorCode::invalid_argument, "shape extents must be positive, got " + to_string(*this));
    require(total <= std::numeric_limits<Index>::max() / n, ErrorCode::invalid_argument,
            "shape " + to_string(*this) + " overflows the index range");
    total *= n;
  }
}

Shape::Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}

Index Shape::numel() const {
  return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>());
}

Index Shape::leading(Index mode) const {
  return std::accumulate(dims_.begin(), dims_.begin() + mode, Index{1}, std::multiplies<>());
}

Index Shape::trailing(Index mode) const {
  return std::accumulate(dims_.begin() + mode + 1, dims_.end(), Index{1}, std::multiplies<>());
}

Shape Shape::with(Index mode, Index extent) const {
  std::vector<Index> d = dims_;
  d[static_cast<std::size_t>(mode)] = extent;
  return Shape(std::move(d));
}

std::string to_string(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.dims().size(); ++i) os << (i ? "," : "") << shape.dims()[i];
  os << ')';
  return os.str();
}

namespace {

void check_mode(const Shape& shape, Index mode) {
  require(mode >= 0 && mode < shape.order(), ErrorCode::invalid_argument,
          "mode " + std::to_string(mode) + " out of range for order-" +
              std::to_string(shape.order()) + " tensor");
}

void check_same_shape(const DenseTensor& a, const DenseTensor& b, const char* op) {
  require(a.shape() == b.shape(), ErrorCode::shape_mismatch,
          std::string(op) + ": shapes " + to_string(a.shape()) + " and " + to_string(b.shape()) +
              " differ");
}

}  // namespace

DenseTensor::DenseTensor(Shape shape)
    : shape_(std::move(shape)), data_(static_cast<std::size_t>(shape_.numel())) {}

DenseTensor::DenseTensor(Shape shape, std::vector<Scalar> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  require(static_cast<Index>(data_.size()) == shape_.numel(), ErrorCode::shape_mismatch,
          "data length " + std::to_string(data_.size()) + " does not match shape " +
              to_string(shape_));
}

DenseTensor DenseTensor::from_matrix(const Matrix& m) {
  DenseTensor t(Shape{m.rows(), m.cols()});
  Eigen::Map<Matrix>(t.data_.data(), m.rows(), m.cols()) = m;
  return t;
}

Index DenseTensor::flat_index(std::span<const Index> idx) const {
  require(static_cast<Index>(idx.size()) == order(), ErrorCode::invalid_argument,
          "index arity does not match tensor order");
  Index flat = 0;
  Index stride = 1;
  for (Index k = 0; k < order(); ++k) {
    Index i = idx[static_cast<std::size_t>(k)];
    require(i >= 0 && i < shape_[k], ErrorCode::invalid_argument, "index out of range");
    flat += i * stride;
    stride *= shape_[k];
  }
  return flat;
}

Scalar& DenseTensor::at(std::span<const Index> idx) { return data_[static_cast<std::size_t>(flat_index(idx))]; }

const Scalar& DenseTensor::at(std::span<const Index> idx) const {
  return data_[static_cast<std::size_t>(flat_index(idx))];
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  check_same_shape(*this, other, "add");
  vec() += other.vec();
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  check_same_shape(*this, other, "subtract");
  vec() -= other.vec();
  return *this;
}

DenseTensor& DenseTensor::operator*=(Scalar s) {
  vec() *= s;
  return *this;
}

DenseTensor& DenseTensor::axpy(Scalar s, const DenseTensor& other) {
  check_same_shape(*this, other, "axpy");
  vec() += s * other.vec();
  return *this;
}

// Storage of a tensor viewed around `mode`: for every trailing index r the
// block data[r*left*n .. (r+1)*left*n) is a column-major left×n matrix.
Matrix matricize(const DenseTensor& x, Index mode) {
  check_mode(x.shape(), mode);
  const Index left = x.shape().leading(mode);
  const Index n = x.shape()[mode];
  const Index right = x.shape().trailing(mode);
  Matrix out(n, left * right);
  for (Index r = 0; r < right; ++r) {
    Eigen::Map<const Matrix> block(x.data().data() + r * left * n, left, n);
    out.middleCols(r * left, left) = block.transpose();
  }
  return out;
}

DenseTensor tensorize(const Matrix& m, Index mode, const Shape& shape) {
  check_mode(shape, mode);
  const Index left = shape.leading(mode);
  const Index n = shape[mode];
  const Index right = shape.trailing(mode);
  require(m.rows() == n && m.cols() == left * right, ErrorCode::shape_mismatch,
          "tensorize: " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
              " matrix does not unfold shape " + to_string(shape) + " in mode " + std::to_string(mode));
  DenseTensor out(shape);
  for (Index r = 0; r < right; ++r) {
    Eigen::Map<Matrix> block(out.data().data() + r * left * n, left, n);
    block = m.middleCols(r * left, left).transpose();
  }
  return out;
}

DenseTensor mode_product(const DenseTensor& x, const Matrix& m, Index mode) {
  check_mode(x.shape(), mode);
  const Index n = x.shape()[mode];
  require(m.cols() == n, ErrorCode::shape_mismatch,
          "mode_product: matrix has " + std::to_string(m.cols()) + " columns, mode " +
              std::to_string(mode) + " has extent " + std::to_string(n));
  const Index left = x.shape().leading(mode);
  const Index right = x.shape().trailing(mode);
  const Index p = m.rows();
  DenseTensor out(x.shape().with(mode, p));
  if (left == 1) {
    Eigen::Map<const Matrix> in(x.data().data(), n, right);
    Eigen::Map<Matrix>(out.data().data(), p, right).noalias() = m * in;
    return out;
  }
  for (Index r = 0; r < right; ++r) {
    Eigen::Map<const Matrix> in(x.data().data() + r * left * n, left, n);
    Eigen::Map<Matrix>(out.data().data() + r * left * p, left, p).noalias() = in * m.transpose();
  }
  return out;
}

DenseTensor multi_mode_product(DenseTensor x, std::span<const Matrix* const> mats) {
  require(static_cast<Index>(mats.size()) == x.order(), ErrorCode::invalid_argument,
          "multi_mode_product: need one (possibly null) matrix per mode");
  const Index order = x.order();
  DenseTensor cur = std::move(x);
  for (int pass = 0; pass < 2; ++pass) {
    for (Index k = 0; k < order; ++k) {
      const Matrix* m = mats[static_cast<std::size_t>(k)];
      if (!m) continue;
      const bool contracting = m->rows() < m->cols();
      if ((pass == 0) == contracting) cur = mode_product(cur, *m, k);
    }
  }
  return cur;
}

DenseTensor multi_mode_product_adjoint(DenseTensor x, std::span<const Matrix* const> mats) {
  std::vector<Matrix> adj(mats.size());
  std::vector<const Matrix*> ptrs(mats.size(), nullptr);
  for (std::size_t k = 0; k < mats.size(); ++k) {
    if (!mats[k]) continue;
    adj[k] = mats[k]->adjoint();
    ptrs[k] = &adj[k];
  }
  return multi_mode_product(std::move(x), ptrs);
}

DenseTensor hadamard(const DenseTensor& x, const DenseTensor& y) {
  check_same_shape(x, y, "hadamard");
  DenseTensor out(x.shape());
  out.vec() = x.vec().cwiseProduct(y.vec());
  return out;
}

DenseTensor hadamard_abs2(const DenseTensor& x) {
  DenseTensor out(x.shape());
  out.vec() = x.vec().cwiseAbs2().cast<Scalar>();
  return out;
}

Scalar inner(const DenseTensor& x, const DenseTensor& y) {
  check_same_shape(x, y, "inner");
  return x.vec().dot(y.vec());
}

double fro_norm(const DenseTensor& x) { return x.vec().norm(); }

double fro_distance(const DenseTensor& x, const DenseTensor& y) {
  check_same_shape(x, y, "fro_distance");
  return (x.vec() - y.vec()).norm();
}

}  // namespace ntucker
