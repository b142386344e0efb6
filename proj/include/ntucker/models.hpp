#pragma once

// Right-hand sides and reference solutions for the numerical experiments.

#include <array>
#include <cstdint>
#include <vector>

#include "ntucker/integrator.hpp"
#include "ntucker/tensor.hpp"
#include "ntucker/tucker.hpp"

namespace ntucker {

// Discrete nonlinear Schrödinger lattice i Ȧ = -½ L[A] + ε |A|² ⊙ A on an
// n×n×n grid with zero boundary padding.
struct DnlsParams {
  Index n = 100;
  double epsilon = 1.0;
  double gamma = 10.0;
  // Excitation centres, 1-based lattice indices.
  std::array<std::array<Index, 3>, 2> centers{{{75, 25, 1}, {25, 75, 100}}};
  // Use (j-j0)² + (k-k0)² + (l-l0)² in the initial Gaussians instead of the
  // printed mixed-sign exponent (j-j0)² - (k-k0)² - (l-l0)².
  bool symmetric_gaussian = false;

  // The n = 100 layout mapped onto an n-point lattice: centres and width are
  // rescaled by (n-1)/99.
  static DnlsParams for_lattice(Index n, double epsilon, bool symmetric_gaussian);

  void validate() const;
};

// L[A](j,k,l): sum of the six nearest neighbours, out-of-range terms are zero.
DenseTensor lattice_neighbor_sum(const DenseTensor& a);

// Ȧ = i (½ L[A] - ε |A|² ⊙ A)
DenseTensor dnls_rhs(double t, const DenseTensor& a, const DnlsParams& p);
TensorField dnls_field(const DnlsParams& p);

// Sum of the two Gaussian excitations.
DenseTensor dnls_initial(const DnlsParams& p);
Scalar dnls_initial_entry(const DnlsParams& p, Index j, Index k, Index l);

// Smooth path of exact multilinear rank: A(t) = (C0 + t D) ×_i qf(U_i + t E_i)
// where qf is the sign-fixed thin-QR Q factor.
class SmoothRankPath {
 public:
  SmoothRankPath(std::uint64_t seed, Shape shape, std::vector<Index> ranks, double drift = 0.5);

  TuckerTensor tucker_at(double t) const;
  DenseTensor at(double t) const { return tucker_at(t).dense(); }
  TensorPath as_field() const;

 private:
  Shape shape_;
  std::vector<Matrix> bases_;
  std::vector<Matrix> drifts_;
  DenseTensor core_;
  DenseTensor core_drift_;
};

DenseTensor smooth_rank_path(std::uint64_t seed, const Shape& shape, const std::vector<Index>& ranks,
                             double t);

// Rank-preserving path whose bases in modes 2..d rotate by a quarter turn into
// their orthogonal complement between t0 and t1, so the co-range overlap
// between the endpoints is singular.
class FlippingRankPath {
 public:
  FlippingRankPath(std::uint64_t seed, Shape shape, std::vector<Index> ranks, double t0, double t1);

  TuckerTensor tucker_at(double t) const;
  DenseTensor at(double t) const { return tucker_at(t).dense(); }
  TensorPath as_field() const;

 private:
  double t0_, t1_;
  std::vector<Matrix> bases_;
  std::vector<Matrix> complements_;
  DenseTensor core_;
};

// Classical RK4 on the full tensor ODE.
DenseTensor rk4_dense(const TensorField& field, const DenseTensor& a0, double t0, double t1,
                      std::int64_t n_steps);

}  // namespace ntucker
