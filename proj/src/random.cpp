#include "ntucker/random.hpp"

#include "ntucker/error.hpp"
#include "ntucker/linalg.hpp"

namespace ntucker {

namespace {

Scalar sample(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace

Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = sample(rng);
  return m;
}

DenseTensor random_tensor(Rng& rng, const Shape& shape) {
  DenseTensor t(shape);
  for (Scalar& x : t.data()) x = sample(rng);
  return t;
}

Matrix random_orthonormal(Rng& rng, Index rows, Index cols) {
  return qr_thin(random_matrix(rng, rows, cols)).Q;
}

TuckerTensor random_tucker(Rng& rng, const Shape& shape, std::span<const Index> ranks) {
  require(static_cast<Index>(ranks.size()) == shape.order(), ErrorCode::invalid_argument,
          "random_tucker: need one rank per mode");
  TuckerTensor t;
  t.core = random_tensor(rng, Shape(std::vector<Index>(ranks.begin(), ranks.end())));
  for (Index i = 0; i < shape.order(); ++i)
    t.factors.push_back(random_orthonormal(rng, shape[i], ranks[static_cast<std::size_t>(i)]));
  t.validate();
  return t;
}

}  // namespace ntucker
