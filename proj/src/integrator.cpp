#include "ntucker/integrator.hpp"

#include "ntucker/error.hpp"
#include "ntucker/linalg.hpp"

namespace ntucker {

namespace {

// Evaluation of F(t, ·) and, for exact-increment substeps, the increment of
// the path over the current step.
struct StepField {
  std::function<DenseTensor(double, const DenseTensor&)> eval;
  DenseTensor delta;
  bool has_delta = false;
};

StepField prepare_field(const TensorField& field, const Shape& ambient, double t0, double t1,
                        const SubstepSolver& solver) {
  StepField out;
  const bool exact = std::holds_alternative<ExactIncrement>(solver);
  auto checked = [ambient](auto fn) {
    return [fn = std::move(fn), ambient](double t, const DenseTensor& y) -> DenseTensor {
      DenseTensor r = fn(t, y);
      require(r.shape() == ambient, ErrorCode::shape_mismatch,
              "field returned shape " + to_string(r.shape()) + ", expected " + to_string(ambient));
      return r;
    };
  };
  if (const auto* bb = std::get_if<TensorBlackBox>(&field)) {
    require(!exact, ErrorCode::contract_violation,
            "exact-increment substeps need an explicitly given path, not a black-box field");
    require(static_cast<bool>(bb->f), ErrorCode::invalid_argument, "black-box field is empty");
    out.eval = checked(bb->f);
    return out;
  }
  const auto& path = std::get<TensorPath>(field);
  if (path.derivative)
    out.eval = checked([d = path.derivative](double t, const DenseTensor&) { return d(t); });
  if (exact) {
    if (path.increment) {
      out.delta = path.increment(t0, t1);
    } else {
      require(static_cast<bool>(path.value), ErrorCode::invalid_argument, "path has no value function");
      out.delta = path.value(t1);
      out.delta -= path.value(t0);
    }
    require(out.delta.shape() == ambient, ErrorCode::shape_mismatch,
            "path increment has shape " + to_string(out.delta.shape()) + ", expected " +
                to_string(ambient));
    out.has_delta = true;
  }
  return out;
}

void check_step_inputs(const TuckerTensor& y0, double t0, double t1, const StepConfig& cfg) {
  require(t1 > t0, ErrorCode::invalid_argument, "step needs t1 > t0");
  if (const auto* rk = std::get_if<Rk4>(&cfg.solver))
    require(rk->inner_steps >= 1, ErrorCode::invalid_argument, "RK4 needs at least one inner step");
  y0.validate(cfg.ortho_tol);
}

}  // namespace

TuckerTensor nested_step(const TuckerTensor& y0, const TensorField& field, double t0, double t1,
                         const StepConfig& cfg) {
  check_step_inputs(y0, t0, t1, cfg);
  const Index d = y0.order();
  const Shape ambient = y0.ambient_shape();
  const StepField F = prepare_field(field, ambient, t0, t1, cfg.solver);
  const std::vector<Matrix>& U0 = y0.factors;
  std::vector<Matrix> U1 = U0;
  DenseTensor core = y0.core;

  for (Index i = 0; i < d; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    // Subproblem i lives on (r_1..r_{i-1}, n_i, .., n_d); `lift` maps it back
    // to the ambient space through the already updated bases.
    std::vector<const Matrix*> lift(static_cast<std::size_t>(d), nullptr);
    std::vector<const Matrix*> frame(static_cast<std::size_t>(d), nullptr);
    for (Index k = 0; k < i; ++k) lift[static_cast<std::size_t>(k)] = &U1[static_cast<std::size_t>(k)];
    for (Index l = i + 1; l < d; ++l) frame[static_cast<std::size_t>(l)] = &U0[static_cast<std::size_t>(l)];

    // mat_i(C) = S0 Qᴴ
    const QRFactors cqr = qr_thin(matricize(core, i).adjoint());
    const Matrix& Q = cqr.Q;
    const Shape coeff_shape = core.shape().with(i, ambient[i]);

    // K Vᴴ as a tensor of the subproblem.
    auto to_sub = [&](const Matrix& k) {
      return multi_mode_product(tensorize(k * Q.adjoint(), i, coeff_shape), frame);
    };
    // mat_i(G) V
    auto times_v = [&](const DenseTensor& g) -> Matrix {
      return matricize(multi_mode_product_adjoint(g, frame), i) * Q;
    };
    auto sub_field = [&](double t, const DenseTensor& yi) {
      return multi_mode_product_adjoint(F.eval(t, multi_mode_product(yi, lift)), lift);
    };
    Matrix delta_v;
    if (F.has_delta) delta_v = times_v(multi_mode_product_adjoint(F.delta, lift));

    SubstepSystem k_sys;
    if (F.eval) k_sys.rate = [&](double t, const Matrix& k) { return times_v(sub_field(t, to_sub(k))); };
    if (F.has_delta) k_sys.increment = [&](double, double) { return delta_v; };
    const Matrix k1 = solve_substep(k_sys, U0[ui] * cqr.R.adjoint(), t0, t1, cfg.solver);
    const QRFactors kqr = qr_thin(k1);
    U1[ui] = kqr.Q;
    const Matrix& Ui = U1[ui];

    SubstepSystem s_sys;
    if (F.eval)
      s_sys.rate = [&](double t, const Matrix& s) -> Matrix {
        return Ui.adjoint() * times_v(sub_field(t, to_sub(Ui * s)));
      };
    if (F.has_delta) s_sys.increment = [&](double, double) -> Matrix { return Ui.adjoint() * delta_v; };
    const Matrix s_tilde = solve_substep(reversed(std::move(s_sys)), kqr.R, t0, t1, cfg.solver);

    core = tensorize(s_tilde * Q.adjoint(), i, core.shape());
  }

  // Core step on Lᴴ = mat_d(C).
  const Index last = d - 1;
  const Matrix& Ud = U1[static_cast<std::size_t>(last)];
  std::vector<const Matrix*> lift(static_cast<std::size_t>(d), nullptr);
  for (Index k = 0; k < last; ++k) lift[static_cast<std::size_t>(k)] = &U1[static_cast<std::size_t>(k)];
  const Shape sub_shape = core.shape().with(last, ambient[last]);

  SubstepSystem l_sys;
  if (F.eval)
    l_sys.rate = [&](double t, const Matrix& x) -> Matrix {
      DenseTensor arg = multi_mode_product(tensorize(Ud * x, last, sub_shape), lift);
      return Ud.adjoint() * matricize(multi_mode_product_adjoint(F.eval(t, arg), lift), last);
    };
  Matrix delta_l;
  if (F.has_delta) {
    delta_l = Ud.adjoint() * matricize(multi_mode_product_adjoint(F.delta, lift), last);
    l_sys.increment = [&](double, double) { return delta_l; };
  }
  const Matrix x1 = solve_substep(l_sys, matricize(core, last), t0, t1, cfg.solver);
  return {tensorize(x1, last, core.shape()), std::move(U1)};
}

TuckerTensor classic_step(const TuckerTensor& y0, const TensorField& field, double t0, double t1,
                          const StepConfig& cfg) {
  check_step_inputs(y0, t0, t1, cfg);
  const Index d = y0.order();
  const Shape ambient = y0.ambient_shape();
  const StepField F = prepare_field(field, ambient, t0, t1, cfg.solver);
  const std::vector<Matrix>& U0 = y0.factors;
  std::vector<Matrix> U1 = U0;
  DenseTensor core = y0.core;

  for (Index i = 0; i < d; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    // Co-range basis: new factors below mode i, old ones above.
    std::vector<const Matrix*> basis(static_cast<std::size_t>(d), nullptr);
    for (Index k = 0; k < d; ++k) {
      if (k == i) continue;
      basis[static_cast<std::size_t>(k)] = k < i ? &U1[static_cast<std::size_t>(k)] : &U0[static_cast<std::size_t>(k)];
    }
    const QRFactors cqr = qr_thin(matricize(core, i).adjoint());
    const Matrix& Q = cqr.Q;
    const Shape coeff_shape = core.shape().with(i, ambient[i]);

    auto to_full = [&](const Matrix& k) {
      return multi_mode_product(tensorize(k * Q.adjoint(), i, coeff_shape), basis);
    };
    auto times_v = [&](const DenseTensor& g) -> Matrix {
      return matricize(multi_mode_product_adjoint(g, basis), i) * Q;
    };
    Matrix delta_v;
    if (F.has_delta) delta_v = times_v(F.delta);

    SubstepSystem k_sys;
    if (F.eval) k_sys.rate = [&](double t, const Matrix& k) { return times_v(F.eval(t, to_full(k))); };
    if (F.has_delta) k_sys.increment = [&](double, double) { return delta_v; };
    const Matrix k1 = solve_substep(k_sys, U0[ui] * cqr.R.adjoint(), t0, t1, cfg.solver);
    const QRFactors kqr = qr_thin(k1);
    U1[ui] = kqr.Q;
    const Matrix& Ui = U1[ui];

    SubstepSystem s_sys;
    if (F.eval)
      s_sys.rate = [&](double t, const Matrix& s) -> Matrix {
        return Ui.adjoint() * times_v(F.eval(t, to_full(Ui * s)));
      };
    if (F.has_delta) s_sys.increment = [&](double, double) -> Matrix { return Ui.adjoint() * delta_v; };
    const Matrix s1 = solve_substep(reversed(std::move(s_sys)), kqr.R, t0, t1, cfg.solver);

    core = tensorize(s1 * Q.adjoint(), i, core.shape());
  }

  // Ċ = F(t, C ×_i U_i¹) ×_i U_i¹ᴴ on the vectorised core.
  const std::vector<const Matrix*> all = factor_ptrs(U1);
  const Shape core_shape = core.shape();
  auto as_column = [](const DenseTensor& t) -> Matrix { return t.vec(); };
  SubstepSystem c_sys;
  if (F.eval)
    c_sys.rate = [&](double t, const Matrix& c) -> Matrix {
      DenseTensor ct(core_shape, std::vector<Scalar>(c.data(), c.data() + c.size()));
      return as_column(multi_mode_product_adjoint(F.eval(t, multi_mode_product(ct, all)), all));
    };
  Matrix delta_c;
  if (F.has_delta) {
    delta_c = as_column(multi_mode_product_adjoint(F.delta, all));
    c_sys.increment = [&](double, double) { return delta_c; };
  }
  const Matrix c1 = solve_substep(c_sys, as_column(core), t0, t1, cfg.solver);
  return {DenseTensor(core_shape, std::vector<Scalar>(c1.data(), c1.data() + c1.size())), std::move(U1)};
}

TuckerTensor integrate(const TuckerTensor& y0, const TensorField& field, double t0, double t_end,
                       std::int64_t n_steps, const StepConfig& cfg, Method method,
                       std::vector<StepRecord>* log) {
  require(n_steps >= 1, ErrorCode::invalid_argument, "integrate needs at least one step");
  require(t_end > t0, ErrorCode::invalid_argument, "integrate needs t_end > t0");
  const double h = (t_end - t0) / static_cast<double>(n_steps);
  TuckerTensor y = y0;
  for (std::int64_t n = 0; n < n_steps; ++n) {
    const double a = t0 + static_cast<double>(n) * h;
    const double b = n + 1 == n_steps ? t_end : t0 + static_cast<double>(n + 1) * h;
    y = method == Method::nested ? nested_step(y, field, a, b, cfg) : classic_step(y, field, a, b, cfg);
    if (log) log->push_back({b, fro_norm(y.core)});
  }
  return y;
}

}  // namespace ntucker
