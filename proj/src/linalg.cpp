#include "ntucker/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ntucker/error.hpp"

namespace ntucker {

QRFactors qr_thin(const Matrix& a) {
  const Index n = a.rows();
  const Index r = a.cols();
  require(n >= r, ErrorCode::invalid_argument,
          "qr_thin needs rows >= cols, got " + std::to_string(n) + "x" + std::to_string(r));
  Matrix work = a;
  // Householder vectors, stored unnormalised in the lower part of `vs`.
  Matrix vs = Matrix::Zero(n, r);
  Eigen::VectorXd betas = Eigen::VectorXd::Zero(r);

  for (Index k = 0; k < r; ++k) {
    auto x = work.col(k).tail(n - k);
    const double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    const Scalar x0 = x(0);
    const Scalar phase = std::abs(x0) == 0.0 ? Scalar(1.0) : x0 / std::abs(x0);
    const Scalar alpha = -phase * xnorm;
    Eigen::VectorXcd v = x;
    v(0) -= alpha;
    const double vnorm2 = v.squaredNorm();
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    auto trailing = work.bottomRightCorner(n - k, r - k);
    Eigen::RowVectorXcd w = v.adjoint() * trailing;
    trailing.noalias() -= beta * v * w;
    vs.col(k).tail(n - k) = v;
    betas(k) = beta;
  }

  QRFactors f;
  f.R = work.topRows(r).triangularView<Eigen::Upper>();
  f.Q = Matrix::Identity(n, r);
  for (Index k = r - 1; k >= 0; --k) {
    if (betas(k) == 0.0) continue;
    auto v = vs.col(k).tail(n - k);
    auto block = f.Q.bottomRows(n - k);
    Eigen::RowVectorXcd w = v.adjoint() * block;
    block.noalias() -= betas(k) * v * w;
  }
  for (Index k = 0; k < r; ++k) {
    const Scalar d = f.R(k, k);
    const double mag = std::abs(d);
    if (mag == 0.0) continue;
    const Scalar phase = d / mag;
    f.R.row(k) *= std::conj(phase);
    f.R(k, k) = mag;
    f.Q.col(k) *= phase;
  }
  return f;
}

namespace {

// Appends orthonormal columns to `u` (whose first `keep` columns are already
// orthonormal) until it has u.cols() columns, using coordinate vectors in
// order as candidates.
void complete_basis(Matrix& u, Index keep) {
  const Index m = u.rows();
  Index next = keep;
  for (Index e = 0; e < m && next < u.cols(); ++e) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(m, e);
    for (int pass = 0; pass < 2; ++pass) {
      if (next > 0) v -= u.leftCols(next) * (u.leftCols(next).adjoint() * v);
    }
    const double nv = v.norm();
    if (nv < 0.5) continue;
    u.col(next++) = v / nv;
  }
}

// Hestenes Jacobi on a tall (m >= n) matrix.
SVDFactors jacobi_tall(const Matrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  Matrix w = a;
  Matrix v = Matrix::Identity(n, n);
  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<Index>(m, 1));
  constexpr int max_sweeps = 80;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = w.col(p).squaredNorm();
        const double beta = w.col(q).squaredNorm();
        const Scalar gamma = w.col(p).dot(w.col(q));
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Scalar phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // [w_p w_q] <- [w_p w_q] * [[c, s e^{iφ}], [-s e^{-iφ}, c]]
        Eigen::VectorXcd wp = w.col(p);
        w.col(p) = c * wp - (s * std::conj(phase)) * w.col(q);
        w.col(q) = (s * phase) * wp + c * w.col(q);
        Eigen::VectorXcd vp = v.col(p);
        v.col(p) = c * vp - (s * std::conj(phase)) * v.col(q);
        v.col(q) = (s * phase) * vp + c * v.col(q);
      }
    }
    if (!rotated) break;
  }

  Eigen::VectorXd norms(n);
  for (Index j = 0; j < n; ++j) norms(j) = w.col(j).norm();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return norms(i) > norms(j); });

  SVDFactors f;
  f.U = Matrix::Zero(m, n);
  f.V = Matrix(n, n);
  f.sigma = Eigen::VectorXd(n);
  const double smax = n > 0 ? norms(order[0]) : 0.0;
  const double zero_cut = smax * std::numeric_limits<double>::epsilon() * static_cast<double>(m);
  Index nonzero = 0;
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    f.sigma(j) = norms(src);
    f.V.col(j) = v.col(src);
    if (norms(src) > zero_cut && norms(src) > 0.0) {
      f.U.col(j) = w.col(src) / norms(src);
      nonzero = j + 1;
    }
  }
  complete_basis(f.U, nonzero);
  return f;
}

}  // namespace

SVDFactors svd_thin(const Matrix& a) {
  if (a.rows() < a.cols()) {
    SVDFactors t = svd_thin(a.adjoint());
    std::swap(t.U, t.V);
    return t;
  }
  if (a.cols() == 0) return {Matrix(a.rows(), 0), Eigen::VectorXd(0), Matrix(0, 0)};
  if (a.rows() > a.cols()) {
    QRFactors qr = qr_thin(a);
    SVDFactors inner = jacobi_tall(qr.R);
    inner.U = qr.Q * inner.U;
    return inner;
  }
  return jacobi_tall(a);
}

TuckerTensor hosvd_truncate(const DenseTensor& x, std::span<const Index> ranks) {
  require(static_cast<Index>(ranks.size()) == x.order(), ErrorCode::invalid_argument,
          "hosvd_truncate: need one rank per mode");
  TuckerTensor t;
  t.factors.reserve(ranks.size());
  for (Index i = 0; i < x.order(); ++i) {
    const Index r = ranks[static_cast<std::size_t>(i)];
    require(r >= 1 && r <= x.shape()[i], ErrorCode::invalid_argument,
            "hosvd_truncate: rank " + std::to_string(r) + " invalid for extent " +
                std::to_string(x.shape()[i]));
    SVDFactors f = svd_thin(matricize(x, i));
    // Jacobi rotations leave an orthonormality defect that grows with the
    // extent; one QR pass restores it without moving the span.
    t.factors.push_back(qr_thin(f.U.leftCols(r)).Q);
  }
  t.core = multi_mode_product_adjoint(x, factor_ptrs(t.factors));
  return t;
}

Matrix pseudoinverse(const Matrix& a, double rel_tol, Index* rank) {
  SVDFactors f = svd_thin(a);
  const double smax = f.sigma.size() ? f.sigma(0) : 0.0;
  Index k = 0;
  while (k < f.sigma.size() && f.sigma(k) > rel_tol * smax && f.sigma(k) > 0.0) ++k;
  if (rank) *rank = k;
  Matrix out = Matrix::Zero(a.cols(), a.rows());
  if (k == 0) return out;
  Eigen::VectorXd inv = f.sigma.head(k).cwiseInverse();
  out.noalias() = f.V.leftCols(k) * inv.asDiagonal() * f.U.leftCols(k).adjoint();
  return out;
}

}  // namespace ntucker
