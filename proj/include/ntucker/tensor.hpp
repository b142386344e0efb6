#pragma once

// Dense complex tensors in colexicographic (first index fastest) storage,
// together with unfoldings and mode products. Modes are 0-based in the C++
// API; the on-disk formats only depend on the flat storage order.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ntucker {

using Index = Eigen::Index;
using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<Index> dims);
  Shape(std::initializer_list<Index> dims);

  Index order() const { return static_cast<Index>(dims_.size()); }
  Index operator[](Index mode) const { return dims_[static_cast<std::size_t>(mode)]; }
  const std::vector<Index>& dims() const { return dims_; }

  Index numel() const;
  // Product of the extents of all modes before `mode`.
  Index leading(Index mode) const;
  // Product of the extents of all modes after `mode`.
  Index trailing(Index mode) const;
  // Copy with the extent of `mode` replaced.
  Shape with(Index mode, Index extent) const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<Index> dims_;
};

std::string to_string(const Shape& shape);

class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<Scalar> data);

  static DenseTensor from_matrix(const Matrix& m);

  const Shape& shape() const { return shape_; }
  Index order() const { return shape_.order(); }
  Index numel() const { return static_cast<Index>(data_.size()); }

  Scalar& operator[](Index flat) { return data_[static_cast<std::size_t>(flat)]; }
  const Scalar& operator[](Index flat) const { return data_[static_cast<std::size_t>(flat)]; }

  // 0-based multi-index access.
  Scalar& at(std::span<const Index> idx);
  const Scalar& at(std::span<const Index> idx) const;
  Scalar& at(std::initializer_list<Index> idx) { return at(std::span(idx.begin(), idx.size())); }
  const Scalar& at(std::initializer_list<Index> idx) const {
    return at(std::span(idx.begin(), idx.size()));
  }

  std::span<Scalar> data() { return data_; }
  std::span<const Scalar> data() const { return data_; }

  Eigen::Map<Eigen::VectorXcd> vec() { return {data_.data(), numel()}; }
  Eigen::Map<const Eigen::VectorXcd> vec() const { return {data_.data(), numel()}; }

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(Scalar s);
  // this += s * other
  DenseTensor& axpy(Scalar s, const DenseTensor& other);

  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(Scalar s, DenseTensor a) { return a *= s; }
  friend DenseTensor operator*(DenseTensor a, Scalar s) { return a *= s; }

 private:
  Index flat_index(std::span<const Index> idx) const;

  Shape shape_;
  std::vector<Scalar> data_;
};

// mode-i unfolding: rows indexed by mode i, columns by the remaining modes in
// ascending order with the lowest remaining mode fastest.
Matrix matricize(const DenseTensor& x, Index mode);
// Inverse of matricize for the given target shape.
DenseTensor tensorize(const Matrix& m, Index mode, const Shape& shape);

// X ×_mode M, i.e. matricize(result, mode) = M * matricize(x, mode).
DenseTensor mode_product(const DenseTensor& x, const Matrix& m, Index mode);

// Applies mats[k] in mode k for every non-null entry. Contracting modes are
// applied before expanding ones so intermediates stay small.
DenseTensor multi_mode_product(DenseTensor x, std::span<const Matrix* const> mats);
// Same with every factor conjugate-transposed (projection onto the factors).
DenseTensor multi_mode_product_adjoint(DenseTensor x, std::span<const Matrix* const> mats);

DenseTensor hadamard(const DenseTensor& x, const DenseTensor& y);
// Elementwise |x|^2 stored as complex with zero imaginary part.
DenseTensor hadamard_abs2(const DenseTensor& x);

// sum conj(x) * y
Scalar inner(const DenseTensor& x, const DenseTensor& y);
double fro_norm(const DenseTensor& x);
double fro_distance(const DenseTensor& x, const DenseTensor& y);

}  // namespace ntucker
