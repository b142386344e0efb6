#include "ntucker/experiments.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ntucker/error.hpp"
#include "ntucker/integrator.hpp"
#include "ntucker/ksl.hpp"
#include "ntucker/linalg.hpp"
#include "ntucker/random.hpp"

namespace ntucker {

Index ExperimentReport::column(const std::string& col) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c].name == col) return static_cast<Index>(c);
  fail(ErrorCode::invalid_argument, "report '" + name + "' has no column '" + col + "'");
}

double ExperimentReport::value(std::size_t row, const std::string& col) const {
  return rows.at(row).at(static_cast<std::size_t>(column(col)));
}

std::vector<double> ExperimentReport::values(const std::string& col) const {
  const auto c = static_cast<std::size_t>(column(col));
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

void ExperimentReport::validate() const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == columns.size(), ErrorCode::shape_mismatch,
            "report '" + name + "': row " + std::to_string(r) + " has the wrong width");
    for (std::size_t c = 0; c < columns.size(); ++c)
      require(std::isfinite(rows[r][c]), ErrorCode::numerical,
              "report '" + name + "': non-finite " + columns[c].name + " in row " + std::to_string(r));
  }
}

std::string ExperimentReport::csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c].name;
  os << '\n';
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (columns[c].integer)
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(std::llround(row[c])));
      else
        std::snprintf(buf, sizeof buf, "%.5e", row[c]);
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
  return os.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::invalid_argument,
          "loglog_slope needs at least two paired samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, ErrorCode::invalid_argument, "loglog_slope needs positive samples");
    const double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::int64_t inner_steps_for(double h, double inner_h) {
  require(h > 0 && inner_h > 0, ErrorCode::invalid_argument, "step sizes must be positive");
  return std::max<std::int64_t>(1, std::llround(std::ceil(h / inner_h - 1e-9)));
}

TensorField random_smooth_field(std::uint64_t seed, const Shape& shape) {
  Rng rng(seed);
  std::vector<Matrix> ms;
  for (Index i = 0; i < shape.order(); ++i)
    ms.push_back(random_matrix(rng, shape[i], shape[i]) * (0.5 / std::sqrt(static_cast<double>(shape[i]))));
  DenseTensor g = random_tensor(rng, shape);
  g *= 0.1 / std::sqrt(static_cast<double>(shape.numel()));
  return TensorBlackBox{[ms = std::move(ms), g = std::move(g)](double t, const DenseTensor& y) {
    DenseTensor out = hadamard(hadamard_abs2(y), y);
    out *= 0.5;
    for (std::size_t i = 0; i < ms.size(); ++i) out += mode_product(y, ms[i], static_cast<Index>(i));
    out.axpy(std::cos(t), g);
    return out;
  }};
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void note(const Progress& p, const std::string& msg) {
  if (p) p(msg);
}

std::string join(const std::vector<Index>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double relative_error(const DenseTensor& approx, const DenseTensor& exact) {
  return fro_distance(approx, exact) / fro_norm(exact);
}

// One matrix KSL step along the order-2 smooth path (Y = U C U2ᵀ, V = conj(U2)).
double matrix_exactness(const SmoothRankPath& path, double h) {
  const TuckerTensor y0 = path.tucker_at(0.0);
  LowRankMatrixState state{y0.factors[0], matricize(y0.core, 0), y0.factors[1].conjugate()};
  MatrixPath field{[&](double t) { return matricize(path.at(t), 0); }, {}};
  const LowRankMatrixState y1 = ksl_matrix_step(state, field, 0.0, h, ExactIncrement{});
  const Matrix exact = matricize(path.at(h), 0);
  return (y1.dense() - exact).norm() / exact.norm();
}

std::uint64_t physical_memory() {
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long page = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page <= 0) return 0;
  return static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page);
}

}  // namespace

ExperimentReport run_exactness(const ExactnessOptions& opts) {
  require(!opts.seeds.empty(), ErrorCode::invalid_argument, "exactness needs at least one seed");
  require(opts.h > 0, ErrorCode::invalid_argument, "exactness needs h > 0");
  const Shape shape(opts.shape);
  require(static_cast<Index>(opts.ranks.size()) == shape.order(), ErrorCode::invalid_argument,
          "exactness: need one rank per mode");
  const bool matrix_case = shape.order() == 2;
  if (matrix_case)
    require(opts.ranks[0] == opts.ranks[1], ErrorCode::invalid_argument,
            "exactness: matrix case needs equal ranks");

  ExperimentReport rep;
  rep.name = "exactness";
  rep.columns = {{"seed", true}, {"error", false}};
  if (opts.include_flip) rep.columns.push_back({"flip_error", false});
  rep.metadata = {{"shape", join(opts.shape)}, {"ranks", join(opts.ranks)}, {"h", fmt(opts.h)},
                  {"solver", "exact-increment"}, {"integrator", matrix_case ? "matrix-ksl" : "nested"}};

  StepConfig cfg;
  cfg.h = opts.h;
  cfg.solver = ExactIncrement{};
  for (std::uint64_t seed : opts.seeds) {
    const auto start = Clock::now();
    const SmoothRankPath path(seed, shape, opts.ranks);
    std::vector<double> row{static_cast<double>(seed)};
    if (matrix_case) {
      row.push_back(matrix_exactness(path, opts.h));
    } else {
      const TuckerTensor y1 = nested_step(path.tucker_at(0.0), path.as_field(), 0.0, opts.h, cfg);
      row.push_back(relative_error(y1.dense(), path.at(opts.h)));
    }
    if (opts.include_flip) {
      const FlippingRankPath flip(seed, shape, opts.ranks, 0.0, opts.h);
      if (matrix_case) {
        const TuckerTensor f0 = flip.tucker_at(0.0);
        LowRankMatrixState state{f0.factors[0], matricize(f0.core, 0), f0.factors[1].conjugate()};
        MatrixPath field{[&](double t) { return matricize(flip.at(t), 0); }, {}};
        const LowRankMatrixState y1 = ksl_matrix_step(state, field, 0.0, opts.h, ExactIncrement{});
        const Matrix exact = matricize(flip.at(opts.h), 0);
        row.push_back((y1.dense() - exact).norm() / exact.norm());
      } else {
        const TuckerTensor y1 = nested_step(flip.tucker_at(0.0), flip.as_field(), 0.0, opts.h, cfg);
        row.push_back(relative_error(y1.dense(), flip.at(opts.h)));
      }
    }
    rep.rows.push_back(std::move(row));
    rep.seconds.push_back(since(start));
  }
  rep.validate();
  return rep;
}

ExperimentReport run_equivalence(const EquivalenceOptions& opts) {
  require(!opts.seeds.empty(), ErrorCode::invalid_argument, "equivalence needs at least one seed");
  require(opts.inner_steps >= 1, ErrorCode::invalid_argument, "equivalence needs inner_steps >= 1");
  const Shape shape(opts.shape);
  ExperimentReport rep;
  rep.name = "equivalence";
  rep.columns = {{"seed", true}, {"difference", false}};
  rep.metadata = {{"shape", join(opts.shape)}, {"ranks", join(opts.ranks)}, {"h", fmt(opts.h)},
                  {"solver", "rk4x" + std::to_string(opts.inner_steps)}};
  StepConfig cfg;
  cfg.h = opts.h;
  cfg.solver = Rk4{opts.inner_steps};
  for (std::uint64_t seed : opts.seeds) {
    const auto start = Clock::now();
    Rng rng(seed);
    TuckerTensor y0 = random_tucker(rng, shape, opts.ranks);
    y0.core *= 1.0 / fro_norm(y0.core);
    const TensorField field = random_smooth_field(seed + 7919, shape);
    const DenseTensor a = nested_step(y0, field, 0.0, opts.h, cfg).dense();
    const DenseTensor b = classic_step(y0, field, 0.0, opts.h, cfg).dense();
    rep.rows.push_back({static_cast<double>(seed), relative_error(b, a)});
    rep.seconds.push_back(since(start));
  }
  rep.validate();
  return rep;
}

ExperimentReport run_dnls_table(const DnlsTableOptions& opts) {
  require(!opts.eps.empty() && !opts.h.empty(), ErrorCode::invalid_argument,
          "dnls-table needs nonempty eps and h lists");
  require(opts.ranks.size() == 3, ErrorCode::invalid_argument, "dnls-table needs three ranks");
  require(opts.t_end > 0 && opts.reference_h > 0, ErrorCode::invalid_argument,
          "dnls-table needs positive t_end and reference step");
  for (double h : opts.h) require(h > 0, ErrorCode::invalid_argument, "dnls-table step sizes must be positive");
  for (Index r : opts.ranks)
    require(r >= 1 && r <= opts.n, ErrorCode::invalid_argument, "dnls-table rank out of range");

  // Working set: the dense reference (state, four stages, probe) plus the
  // integrator's dense evaluations and mode-product temporaries.
  const auto cells = static_cast<std::uint64_t>(opts.n) * static_cast<std::uint64_t>(opts.n) *
                     static_cast<std::uint64_t>(opts.n);
  const std::uint64_t need = cells * sizeof(Scalar) * 24;
  const std::uint64_t limit = opts.memory_limit_bytes ? opts.memory_limit_bytes : physical_memory();
  if (limit && need > limit)
    fail(ErrorCode::resource, "dnls-table with n=" + std::to_string(opts.n) + " needs about " +
                                  std::to_string(need >> 20) + " MiB but only " + std::to_string(limit >> 20) +
                                  " MiB are available; lower --n");

  ExperimentReport rep;
  rep.name = "dnls-table";
  rep.columns = {{"eps", false}, {"h", false}, {"error", false}, {"relative_error", false}, {"reference_norm", false}};
  rep.metadata = {{"n", std::to_string(opts.n)},
                  {"ranks", join(opts.ranks)},
                  {"t_end", fmt(opts.t_end)},
                  {"inner", opts.inner_steps > 0 ? "steps=" + std::to_string(opts.inner_steps) : "h=" + fmt(opts.inner_h)},
                  {"reference_h", fmt(opts.reference_h)},
                  {"initial", opts.symmetric_gaussian ? "symmetric-gaussian" : "verbatim"}};

  const std::int64_t ref_steps = std::max<std::int64_t>(1, std::llround(opts.t_end / opts.reference_h));
  for (double eps : opts.eps) {
    const DnlsParams p = DnlsParams::for_lattice(opts.n, eps, opts.symmetric_gaussian);
    const TensorField field = dnls_field(p);
    const DenseTensor a0 = dnls_initial(p);
    auto start = Clock::now();
    note(opts.progress, "eps=" + fmt(eps) + ": reference RK4, " + std::to_string(ref_steps) + " steps");
    // Advanced in blocks so a diverging run is caught early.
    DenseTensor reference = a0;
    const std::int64_t block = 100;
    for (std::int64_t done = 0; done < ref_steps; done += block) {
      const std::int64_t m = std::min(block, ref_steps - done);
      const double ta = opts.t_end * static_cast<double>(done) / static_cast<double>(ref_steps);
      const double tb = opts.t_end * static_cast<double>(done + m) / static_cast<double>(ref_steps);
      reference = rk4_dense(field, reference, ta, tb, m);
      require(std::isfinite(fro_norm(reference)), ErrorCode::numerical,
              "DNLS reference solution diverged for eps=" + fmt(eps) + " near t=" + fmt(tb) +
                  (opts.symmetric_gaussian ? std::string()
                                           : "; the printed initial condition grows without bound, try --symmetric-gaussian"));
    }
    const double ref_seconds = since(start);
    const double ref_norm = fro_norm(reference);
    const TuckerTensor y0 = hosvd_truncate(a0, opts.ranks);
    for (double h : opts.h) {
      start = Clock::now();
      const std::int64_t outer = std::max<std::int64_t>(1, std::llround(opts.t_end / h));
      const std::int64_t inner = opts.inner_steps > 0 ? opts.inner_steps : inner_steps_for(opts.t_end / static_cast<double>(outer), opts.inner_h);
      StepConfig cfg;
      cfg.h = opts.t_end / static_cast<double>(outer);
      cfg.solver = Rk4{inner};
      note(opts.progress, "eps=" + fmt(eps) + " h=" + fmt(h) + ": " + std::to_string(outer) + " steps, rk4x" +
                              std::to_string(inner) + " per substep");
      const TuckerTensor y = integrate(y0, field, 0.0, opts.t_end, outer, cfg, Method::nested);
      const double err = fro_distance(y.dense(), reference);
      rep.rows.push_back({eps, h, err, err / ref_norm, ref_norm});
      rep.seconds.push_back(since(start) + ref_seconds / static_cast<double>(opts.h.size()));
      note(opts.progress, "eps=" + fmt(eps) + " h=" + fmt(h) + ": error " + fmt(err));
    }
  }
  rep.validate();
  return rep;
}

ExperimentReport run_addition(const AdditionOptions& opts) {
  require(!opts.norms.empty(), ErrorCode::invalid_argument, "addition needs at least one norm");
  for (std::size_t i = 0; i < opts.norms.size(); ++i) {
    require(opts.norms[i] > 0, ErrorCode::invalid_argument, "addition norms must be positive");
    require(i == 0 || opts.norms[i] < opts.norms[i - 1], ErrorCode::invalid_argument,
            "addition norms must be strictly descending");
  }
  const Shape shape(opts.shape);
  ExperimentReport rep;
  rep.name = "addition";
  rep.columns = {{"norm", false}, {"integrator_error", false}, {"hosvd_error", false}, {"ratio", false}};
  rep.metadata = {{"shape", join(opts.shape)}, {"ranks", join(opts.ranks)}, {"seed", std::to_string(opts.seed)},
                  {"h", "1"}, {"solver", "exact-increment"}};

  Rng rng(opts.seed);
  const TuckerTensor a = random_tucker(rng, shape, opts.ranks);
  const DenseTensor a_dense = a.dense();
  const DenseTensor direction = random_tangent(a, 1.0, opts.seed + 104729).dense();
  StepConfig cfg;
  cfg.h = 1.0;
  cfg.solver = ExactIncrement{};

  for (double norm : opts.norms) {
    const auto start = Clock::now();
    const DenseTensor b = norm * direction;
    DenseTensor sum = a_dense;
    sum += b;
    TensorPath path;
    path.value = [&](double t) {
      DenseTensor v = a_dense;
      v.axpy(t, b);
      return v;
    };
    path.increment = [&](double t0, double t1) { return (t1 - t0) * b; };
    const TuckerTensor y1 = nested_step(a, path, 0.0, 1.0, cfg);
    const double int_err = fro_distance(y1.dense(), sum);
    const double svd_err = fro_distance(hosvd_truncate(sum, opts.ranks).dense(), sum);
    rep.rows.push_back({norm, int_err, svd_err, int_err / svd_err});
    rep.seconds.push_back(since(start));
    note(opts.progress, "|B|=" + fmt(norm) + ": integrator " + fmt(int_err) + ", hosvd " + fmt(svd_err));
  }
  rep.validate();
  return rep;
}

}  // namespace ntucker
