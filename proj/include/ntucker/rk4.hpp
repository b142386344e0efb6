#pragma once

#include <cstdint>

#include "ntucker/tensor.hpp"

namespace ntucker {

namespace detail {

inline void add_scaled(Matrix& y, double a, const Matrix& x) { y.noalias() += a * x; }
inline void add_scaled(DenseTensor& y, double a, const DenseTensor& x) { y.axpy(a, x); }

}  // namespace detail

// Classical fixed-step RK4 on Matrix or DenseTensor states.
template <class State, class Rate>
State rk4_integrate(const Rate& rate, State y, double t0, double t1, std::int64_t steps) {
  using detail::add_scaled;
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (std::int64_t n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * h;
    const State k1 = rate(t, y);
    State probe = y;
    add_scaled(probe, 0.5 * h, k1);
    const State k2 = rate(t + 0.5 * h, probe);
    probe = y;
    add_scaled(probe, 0.5 * h, k2);
    const State k3 = rate(t + 0.5 * h, probe);
    probe = y;
    add_scaled(probe, h, k3);
    const State k4 = rate(t + h, probe);
    add_scaled(y, h / 6.0, k1);
    add_scaled(y, h / 3.0, k2);
    add_scaled(y, h / 3.0, k3);
    add_scaled(y, h / 6.0, k4);
  }
  return y;
}

}  // namespace ntucker
