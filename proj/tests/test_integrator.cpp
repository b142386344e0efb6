#include <doctest.h>

#include <cmath>

#include "ntucker/error.hpp"
#include "ntucker/experiments.hpp"
#include "ntucker/integrator.hpp"
#include "ntucker/linalg.hpp"
#include "ntucker/models.hpp"
#include "ntucker/random.hpp"
#include "oracles.hpp"

using namespace ntucker;

namespace {

TuckerTensor unit_random_tucker(std::uint64_t seed, const Shape& shape, const std::vector<Index>& ranks) {
  Rng rng(seed);
  TuckerTensor y = random_tucker(rng, shape, ranks);
  y.core *= 1.0 / fro_norm(y.core);
  return y;
}

double rel(const DenseTensor& a, const DenseTensor& b) { return fro_distance(a, b) / fro_norm(b); }

const TensorBlackBox zero_field{[](double, const DenseTensor& y) { return DenseTensor(y.shape()); }};

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("zero field keeps the tensor") {
  const TuckerTensor y0 = unit_random_tucker(1, Shape{6, 7, 8}, {2, 3, 2});
  StepConfig cfg;
  cfg.solver = Rk4{2};
  for (Method m : {Method::nested, Method::classic}) {
    const TuckerTensor y1 = m == Method::nested ? nested_step(y0, zero_field, 0.0, 0.1, cfg)
                                                : classic_step(y0, zero_field, 0.0, 0.1, cfg);
    CHECK(rel(y1.dense(), y0.dense()) <= 1e-12);
    CHECK(y1.ranks() == y0.ranks());
    const TuckerTensor y10 = integrate(y0, zero_field, 0.0, 1.0, 10, cfg, m);
    CHECK(rel(y10.dense(), y0.dense()) <= 1e-11);
  }
}

TEST_CASE("exact-rank paths are reproduced in one step") {
  StepConfig cfg;
  cfg.solver = ExactIncrement{};
  SUBCASE("order three") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const SmoothRankPath path(seed, Shape{20, 30, 40}, {3, 4, 5});
      const TuckerTensor y1 = nested_step(path.tucker_at(0.0), path.as_field(), 0.0, 0.1, cfg);
      CHECK(rel(y1.dense(), path.at(0.1)) <= 1e-10);
      CHECK_NOTHROW(y1.validate());
      const TuckerTensor c1 = classic_step(path.tucker_at(0.0), path.as_field(), 0.0, 0.1, cfg);
      CHECK(rel(c1.dense(), path.at(0.1)) <= 1e-10);
    }
  }
  SUBCASE("order four") {
    const SmoothRankPath path(7, Shape{6, 5, 7, 4}, {2, 3, 2, 2});
    const TuckerTensor y1 = nested_step(path.tucker_at(0.0), path.as_field(), 0.0, 0.1, cfg);
    CHECK(rel(y1.dense(), path.at(0.1)) <= 1e-10);
  }
  SUBCASE("rank one") {
    const SmoothRankPath path(3, Shape{20, 30, 40}, {1, 1, 1});
    const TuckerTensor y1 = nested_step(path.tucker_at(0.0), path.as_field(), 0.0, 0.1, cfg);
    CHECK(rel(y1.dense(), path.at(0.1)) <= 1e-10);
  }
  SUBCASE("a quarter-turn of the co-range breaks exactness") {
    const FlippingRankPath path(5, Shape{10, 12, 14}, {2, 3, 2}, 0.0, 0.1);
    const TuckerTensor y1 = nested_step(path.tucker_at(0.0), path.as_field(), 0.0, 0.1, cfg);
    CHECK(rel(y1.dense(), path.at(0.1)) > 1e-3);
  }
}

TEST_CASE("nested and classic steps agree") {
  const Shape shape{8, 9, 10};
  const std::vector<Index> ranks{3, 4, 2};
  StepConfig cfg;
  cfg.solver = Rk4{10};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TuckerTensor y0 = unit_random_tucker(seed, shape, ranks);
    const TensorField f = random_smooth_field(seed + 100, shape);
    const DenseTensor a = nested_step(y0, f, 0.0, 0.1, cfg).dense();
    const DenseTensor b = classic_step(y0, f, 0.0, 0.1, cfg).dense();
    CHECK(rel(b, a) <= 1e-10);
  }
}

TEST_CASE("order two reduces to the matrix integrator") {
  Rng rng(97);
  const Index m = 12, n = 10, r = 3;
  const Matrix a0 = random_matrix(rng, m, n), drift = random_matrix(rng, m, n);
  // A full-rank path, so the low-rank step is a genuine approximation.
  auto value = [&](double t) -> Matrix { return a0 + std::sin(t) * drift + t * t * a0.adjoint().transpose(); };
  auto derivative = [&](double t) -> Matrix { return std::cos(t) * drift + 2 * t * a0.adjoint().transpose(); };
  const TuckerTensor y0 = hosvd_truncate(DenseTensor::from_matrix(a0), std::vector<Index>{r, r});
  const LowRankMatrixState s0{y0.factors[0], matricize(y0.core, 0), y0.factors[1].conjugate()};

  TensorPath tpath;
  tpath.value = [&](double t) { return DenseTensor::from_matrix(value(t)); };
  tpath.derivative = [&](double t) { return DenseTensor::from_matrix(derivative(t)); };
  const MatrixPath mpath{value, derivative};

  SUBCASE("exact increments") {
    StepConfig cfg;
    cfg.solver = ExactIncrement{};
    const DenseTensor y1 = nested_step(y0, tpath, 0.0, 0.1, cfg).dense();
    const Matrix k1 = ksl_matrix_step(s0, mpath, 0.0, 0.1, ExactIncrement{}).dense();
    CHECK((matricize(y1, 0) - k1).norm() <= 1e-12 * k1.norm());
    const DenseTensor c1 = classic_step(y0, tpath, 0.0, 0.1, cfg).dense();
    CHECK((matricize(c1, 0) - k1).norm() <= 1e-12 * k1.norm());
  }
  SUBCASE("RK4 substeps agree up to the substep discretisation") {
    StepConfig cfg;
    cfg.solver = Rk4{50};
    const DenseTensor y1 = nested_step(y0, tpath, 0.0, 0.1, cfg).dense();
    const Matrix k1 = ksl_matrix_step(s0, mpath, 0.0, 0.1, Rk4{50}).dense();
    CHECK((matricize(y1, 0) - k1).norm() <= 1e-10 * k1.norm());
  }
}

TEST_CASE("diagonal linear field is propagated to first order") {
  const Shape shape{6, 5, 4};
  const TuckerTensor y0 = unit_random_tucker(11, shape, {2, 2, 2});
  Eigen::VectorXd diag(6);
  diag << 0.1, -0.3, 0.5, 0.2, -0.1, 0.4;
  const Matrix dmat = diag.cast<Scalar>().asDiagonal();
  const TensorBlackBox f{[&](double, const DenseTensor& y) { return mode_product(y, dmat, 0); }};
  const Matrix prop = (diag.array()).exp().cast<Scalar>().matrix().asDiagonal();
  const DenseTensor exact = mode_product(y0.dense(), prop, 0);
  StepConfig cfg;
  cfg.h = 0.1;
  cfg.solver = Rk4{4};
  const TuckerTensor y = integrate(y0, f, 0.0, 1.0, 10, cfg, Method::nested);
  CHECK(rel(y.dense(), exact) <= 0.1);
  CHECK(rel(integrate(y0, f, 0.0, 0.1, 1, cfg, Method::nested).dense(), nested_step(y0, f, 0.0, 0.1, cfg).dense()) == 0.0);
}

TEST_CASE("first-order convergence of the nested integrator") {
  const Shape shape{6, 7, 8};
  const TuckerTensor y0 = unit_random_tucker(13, shape, {2, 3, 2});
  const TensorField f = random_smooth_field(17, shape);
  auto run = [&](std::int64_t steps) {
    StepConfig cfg;
    cfg.h = 1.0 / static_cast<double>(steps);
    cfg.solver = Rk4{std::max<std::int64_t>(1, 400 / steps)};
    return integrate(y0, f, 0.0, 1.0, steps, cfg, Method::nested).dense();
  };
  const DenseTensor ref = run(320);
  const double e1 = fro_distance(run(10), ref), e2 = fro_distance(run(20), ref), e3 = fro_distance(run(40), ref);
  MESSAGE("errors " << e1 << " " << e2 << " " << e3);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));
  CHECK(e2 / e3 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("norm preservation for a Schrodinger-type field") {
  const DnlsParams p = DnlsParams::for_lattice(12, 0.5, true);
  const TuckerTensor y0 = hosvd_truncate(dnls_initial(p), std::vector<Index>{3, 3, 3});
  StepConfig cfg;
  cfg.solver = Rk4{100};
  const TuckerTensor y1 = nested_step(y0, dnls_field(p), 0.0, 0.1, cfg);
  CHECK(std::abs(fro_norm(y1.dense()) - fro_norm(y0.dense())) <= 1e-6 * fro_norm(y0.dense()));
}

TEST_CASE("integrate logs per-step norms") {
  const TuckerTensor y0 = unit_random_tucker(19, Shape{5, 5, 5}, {2, 2, 2});
  StepConfig cfg;
  std::vector<StepRecord> log;
  integrate(y0, zero_field, 0.0, 0.5, 5, cfg, Method::classic, &log);
  REQUIRE(log.size() == 5);
  CHECK(log.back().t == doctest::Approx(0.5));
  CHECK(log.back().norm == doctest::Approx(1.0));
}

TEST_CASE("input validation") {
  const TuckerTensor y0 = unit_random_tucker(23, Shape{5, 6, 7}, {2, 2, 2});
  StepConfig cfg;
  SUBCASE("exact increments need a path") {
    cfg.solver = ExactIncrement{};
    CHECK_THROWS_AS(nested_step(y0, zero_field, 0.0, 0.1, cfg), Error);
    CHECK_THROWS_AS(classic_step(y0, zero_field, 0.0, 0.1, cfg), Error);
  }
  SUBCASE("non-orthonormal factors") {
    TuckerTensor bad = y0;
    bad.factors[1] *= 1.0 + 1e-9;
    CHECK_THROWS_AS(nested_step(bad, zero_field, 0.0, 0.1, cfg), Error);
  }
  SUBCASE("field of the wrong shape") {
    const TensorBlackBox wrong{[](double, const DenseTensor&) { return DenseTensor(Shape{5, 6}); }};
    CHECK_THROWS_AS(nested_step(y0, wrong, 0.0, 0.1, cfg), Error);
  }
  SUBCASE("time direction and step counts") {
    CHECK_THROWS_AS(nested_step(y0, zero_field, 0.1, 0.1, cfg), Error);
    CHECK_THROWS_AS(integrate(y0, zero_field, 0.0, 1.0, 0, cfg, Method::nested), Error);
  }
  SUBCASE("infeasible ranks") {
    Rng rng(29);
    TuckerTensor y{random_tensor(rng, Shape{1, 1, 4}), {random_orthonormal(rng, 5, 1), random_orthonormal(rng, 5, 1),
                                                        random_orthonormal(rng, 5, 4)}};
    CHECK_THROWS_AS(y.validate(), Error);
  }
}

TEST_CASE("tangent projection") {
  Rng rng(31);
  const Shape shape{4, 3, 2};
  const TuckerTensor y = random_tucker(rng, shape, std::vector<Index>{2, 2, 1});

  SUBCASE("the point itself is tangent") {
    const TangentTensor t = tangent_project(y, y.dense());
    CHECK(fro_distance(t.delta_core, y.core) <= 1e-12 * fro_norm(y.core));
    for (const auto& du : t.delta_factors) CHECK(du.norm() <= 1e-12);
  }
  SUBCASE("agrees with least squares on an explicit tangent basis") {
    for (int rep = 0; rep < 3; ++rep) {
      const DenseTensor z = random_tensor(rng, shape);
      const DenseTensor got = tangent_project(y, z).dense();
      const DenseTensor expect = oracle::tangent_projection_by_basis(y, z);
      CHECK(fro_distance(got, expect) <= 1e-10 * fro_norm(expect));
    }
  }
  SUBCASE("idempotent, self-adjoint and gauged") {
    const DenseTensor z = random_tensor(rng, shape), w = random_tensor(rng, shape);
    const TangentTensor pz = tangent_project(y, z);
    CHECK(pz.gauge_defect() <= 1e-12);
    CHECK(fro_distance(tangent_project(y, pz.dense()).dense(), pz.dense()) <= 1e-10 * fro_norm(pz.dense()));
    const Scalar lhs = inner(pz.dense(), w), rhs = inner(z, tangent_project(y, w).dense());
    CHECK(std::abs(lhs - rhs) <= 1e-10 * fro_norm(z) * fro_norm(w));
  }
  SUBCASE("directions outside every mode subspace project to zero") {
    const TuckerTensor big = random_tucker(rng, Shape{6, 6, 6}, std::vector<Index>{2, 2, 2});
    std::vector<Matrix> perp;
    for (const auto& u : big.factors) {
      const Matrix p = Matrix::Identity(6, 6) - u * u.adjoint();
      perp.push_back(qr_thin(p * random_matrix(rng, 6, 2)).Q);
    }
    const DenseTensor z = multi_mode_product(random_tensor(rng, Shape{2, 2, 2}), factor_ptrs(perp));
    CHECK(fro_norm(tangent_project(big, z).dense()) <= 1e-12 * fro_norm(z));
  }
  SUBCASE("rank-deficient core unfolding is rejected") {
    TuckerTensor deficient = random_tucker(rng, Shape{5, 5, 5}, std::vector<Index>{2, 2, 2});
    deficient.core = DenseTensor(Shape{2, 2, 2});
    deficient.core.at({0, 0, 0}) = 1.0;
    CHECK_THROWS_AS(tangent_project(deficient, random_tensor(rng, Shape{5, 5, 5})), Error);
  }
}

TEST_CASE("random tangent vectors") {
  Rng rng(37);
  const TuckerTensor y = random_tucker(rng, Shape{7, 6, 5}, std::vector<Index>{2, 3, 2});
  const TangentTensor b = random_tangent(y, 2.5, 41);
  CHECK(fro_norm(b.dense()) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(b.gauge_defect() <= 1e-12);
  CHECK(fro_distance(tangent_project(y, b.dense()).dense(), b.dense()) <= 1e-10 * 2.5);
  CHECK(fro_distance(random_tangent(y, 2.5, 41).dense(), b.dense()) == 0.0);
  CHECK(fro_norm(random_tangent(y, 0.0, 41).dense()) == 0.0);
  CHECK_THROWS_AS(random_tangent(y, -1.0, 41), Error);
}

}  // TEST_SUITE
