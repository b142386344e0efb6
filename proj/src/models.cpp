#include "ntucker/models.hpp"

#include <cmath>

#include "ntucker/error.hpp"
#include "ntucker/linalg.hpp"
#include "ntucker/random.hpp"
#include "ntucker/rk4.hpp"

namespace ntucker {

DnlsParams DnlsParams::for_lattice(Index n, double epsilon, bool symmetric_gaussian) {
  DnlsParams p;
  p.n = n;
  p.epsilon = epsilon;
  p.symmetric_gaussian = symmetric_gaussian;
  if (n != 100) {
    const double s = static_cast<double>(n - 1) / 99.0;
    for (auto& c : p.centers)
      for (Index& x : c) x = 1 + static_cast<Index>(std::lround(static_cast<double>(x - 1) * s));
    p.gamma = 10.0 * s;
  }
  p.validate();
  return p;
}

void DnlsParams::validate() const {
  require(n >= 2, ErrorCode::invalid_argument, "DNLS lattice needs n >= 2");
  require(gamma > 0.0, ErrorCode::invalid_argument, "DNLS gamma must be positive");
  for (const auto& c : centers)
    for (Index x : c)
      require(x >= 1 && x <= n, ErrorCode::invalid_argument,
              "DNLS excitation centre index " + std::to_string(x) + " outside [1, " + std::to_string(n) + "]");
}

namespace {

void check_lattice(const DenseTensor& a) {
  require(a.order() == 3, ErrorCode::invalid_argument,
          "lattice operator needs a 3-way tensor, got order " + std::to_string(a.order()));
}

// out += L[a]
void add_neighbor_sum(const DenseTensor& a, Scalar* out) {
  const Index n0 = a.shape()[0], n1 = a.shape()[1], n2 = a.shape()[2];
  const Scalar* x = a.data().data();
  const Index s1 = n0, s2 = n0 * n1;
  for (Index l = 0; l < n2; ++l) {
    for (Index k = 0; k < n1; ++k) {
      const Index base = k * s1 + l * s2;
      const Scalar* col = x + base;
      Scalar* o = out + base;
      for (Index j = 1; j < n0; ++j) o[j] += col[j - 1];
      for (Index j = 0; j + 1 < n0; ++j) o[j] += col[j + 1];
      if (k > 0)
        for (Index j = 0; j < n0; ++j) o[j] += col[j - s1];
      if (k + 1 < n1)
        for (Index j = 0; j < n0; ++j) o[j] += col[j + s1];
      if (l > 0)
        for (Index j = 0; j < n0; ++j) o[j] += col[j - s2];
      if (l + 1 < n2)
        for (Index j = 0; j < n0; ++j) o[j] += col[j + s2];
    }
  }
}

}  // namespace

DenseTensor lattice_neighbor_sum(const DenseTensor& a) {
  check_lattice(a);
  DenseTensor out(a.shape());
  add_neighbor_sum(a, out.data().data());
  return out;
}

DenseTensor dnls_rhs(double, const DenseTensor& a, const DnlsParams& p) {
  check_lattice(a);
  require(a.shape() == Shape({p.n, p.n, p.n}), ErrorCode::shape_mismatch,
          "DNLS state has shape " + to_string(a.shape()) + ", expected an n=" + std::to_string(p.n) +
              " cube");
  const Index n = p.n;
  const Index s1 = n, s2 = n * n;
  const double eps = p.epsilon;
  DenseTensor out(a.shape());
  const Scalar* x = a.data().data();
  Scalar* o = out.data().data();
  // One pass per lattice column; the mode-0 neighbours are handled with
  // explicit end cases so the inner loop has no branches.
  for (Index l = 0; l < n; ++l) {
    for (Index k = 0; k < n; ++k) {
      const Index base = k * s1 + l * s2;
      const Scalar* c = x + base;
      const Scalar* km = k > 0 ? c - s1 : nullptr;
      const Scalar* kp = k + 1 < n ? c + s1 : nullptr;
      const Scalar* lm = l > 0 ? c - s2 : nullptr;
      const Scalar* lp = l + 1 < n ? c + s2 : nullptr;
      Scalar* dst = o + base;
      for (Index j = 0; j < n; ++j) {
        double re = 0.0, im = 0.0;
        if (km) re += km[j].real(), im += km[j].imag();
        if (kp) re += kp[j].real(), im += kp[j].imag();
        if (lm) re += lm[j].real(), im += lm[j].imag();
        if (lp) re += lp[j].real(), im += lp[j].imag();
        if (j > 0) re += c[j - 1].real(), im += c[j - 1].imag();
        if (j + 1 < n) re += c[j + 1].real(), im += c[j + 1].imag();
        const double xr = c[j].real(), xi = c[j].imag();
        const double g = eps * (xr * xr + xi * xi);
        const double vr = 0.5 * re - g * xr, vi = 0.5 * im - g * xi;
        dst[j] = Scalar(-vi, vr);  // i * v
      }
    }
  }
  return out;
}

TensorField dnls_field(const DnlsParams& p) {
  p.validate();
  return TensorBlackBox{[p](double t, const DenseTensor& a) { return dnls_rhs(t, a, p); }};
}

Scalar dnls_initial_entry(const DnlsParams& p, Index j, Index k, Index l) {
  const double inner_sign = p.symmetric_gaussian ? 1.0 : -1.0;
  double v = 0.0;
  for (const auto& c : p.centers) {
    const double dj = static_cast<double>(j - c[0]);
    const double dk = static_cast<double>(k - c[1]);
    const double dl = static_cast<double>(l - c[2]);
    v += std::exp(-1.0 / (p.gamma * p.gamma) * (dj * dj + inner_sign * dk * dk + inner_sign * dl * dl));
  }
  return {v, 0.0};
}

DenseTensor dnls_initial(const DnlsParams& p) {
  p.validate();
  const Index n = p.n;
  DenseTensor a(Shape{n, n, n});
  Index f = 0;
  for (Index l = 1; l <= n; ++l)
    for (Index k = 1; k <= n; ++k)
      for (Index j = 1; j <= n; ++j) a[f++] = dnls_initial_entry(p, j, k, l);
  return a;
}

SmoothRankPath::SmoothRankPath(std::uint64_t seed, Shape shape, std::vector<Index> ranks, double drift)
    : shape_(std::move(shape)) {
  require(static_cast<Index>(ranks.size()) == shape_.order(), ErrorCode::invalid_argument,
          "SmoothRankPath: need one rank per mode");
  Rng rng(seed);
  core_ = random_tensor(rng, Shape(ranks));
  core_drift_ = random_tensor(rng, Shape(ranks));
  core_drift_ *= drift;
  for (Index i = 0; i < shape_.order(); ++i) {
    const Index n = shape_[i];
    const Index r = ranks[static_cast<std::size_t>(i)];
    require(r >= 1 && r <= n, ErrorCode::invalid_argument, "SmoothRankPath: infeasible rank");
    bases_.push_back(random_orthonormal(rng, n, r));
    drifts_.push_back(random_matrix(rng, n, r) * (drift / std::sqrt(static_cast<double>(n))));
  }
  tucker_at(0.0).validate();
}

TuckerTensor SmoothRankPath::tucker_at(double t) const {
  TuckerTensor y;
  y.core = core_;
  y.core.axpy(t, core_drift_);
  for (std::size_t i = 0; i < bases_.size(); ++i) y.factors.push_back(qr_thin(bases_[i] + t * drifts_[i]).Q);
  return y;
}

TensorPath SmoothRankPath::as_field() const {
  TensorPath p;
  p.value = [self = *this](double t) { return self.at(t); };
  return p;
}

DenseTensor smooth_rank_path(std::uint64_t seed, const Shape& shape, const std::vector<Index>& ranks,
                             double t) {
  return SmoothRankPath(seed, shape, ranks).at(t);
}

FlippingRankPath::FlippingRankPath(std::uint64_t seed, Shape shape, std::vector<Index> ranks, double t0,
                                   double t1)
    : t0_(t0), t1_(t1) {
  require(t1 > t0, ErrorCode::invalid_argument, "FlippingRankPath needs t1 > t0");
  require(static_cast<Index>(ranks.size()) == shape.order(), ErrorCode::invalid_argument,
          "FlippingRankPath: need one rank per mode");
  Rng rng(seed);
  core_ = random_tensor(rng, Shape(ranks));
  for (Index i = 0; i < shape.order(); ++i) {
    const Index n = shape[i];
    const Index r = ranks[static_cast<std::size_t>(i)];
    require(i == 0 || 2 * r <= n, ErrorCode::invalid_argument,
            "FlippingRankPath needs n >= 2r in every rotating mode");
    const Matrix q = random_orthonormal(rng, n, i == 0 ? r : 2 * r);
    bases_.push_back(q.leftCols(r));
    complements_.push_back(i == 0 ? Matrix() : Matrix(q.rightCols(r)));
  }
}

TuckerTensor FlippingRankPath::tucker_at(double t) const {
  const double theta = 0.5 * std::acos(-1.0) * (t - t0_) / (t1_ - t0_);
  TuckerTensor y;
  y.core = core_;
  for (std::size_t i = 0; i < bases_.size(); ++i)
    y.factors.push_back(i == 0 ? bases_[i] : Matrix(std::cos(theta) * bases_[i] + std::sin(theta) * complements_[i]));
  return y;
}

TensorPath FlippingRankPath::as_field() const {
  TensorPath p;
  p.value = [self = *this](double t) { return self.at(t); };
  return p;
}

DenseTensor rk4_dense(const TensorField& field, const DenseTensor& a0, double t0, double t1,
                      std::int64_t n_steps) {
  require(n_steps >= 1, ErrorCode::invalid_argument, "rk4_dense needs at least one step");
  require(t1 > t0, ErrorCode::invalid_argument, "rk4_dense needs t1 > t0");
  std::function<DenseTensor(double, const DenseTensor&)> rate;
  if (const auto* bb = std::get_if<TensorBlackBox>(&field)) {
    rate = bb->f;
  } else {
    const auto& path = std::get<TensorPath>(field);
    require(static_cast<bool>(path.derivative), ErrorCode::contract_violation,
            "rk4_dense on an explicit path needs its derivative");
    rate = [d = path.derivative](double t, const DenseTensor&) { return d(t); };
  }
  return rk4_integrate(rate, a0, t0, t1, n_steps);
}

}  // namespace ntucker
