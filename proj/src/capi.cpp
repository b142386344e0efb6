#include "ntucker/ntucker.h"

#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "ntucker/error.hpp"
#include "ntucker/experiments.hpp"
#include "ntucker/integrator.hpp"
#include "ntucker/io.hpp"
#include "ntucker/linalg.hpp"
#include "ntucker/models.hpp"

using namespace ntucker;

struct ntk_tensor {
  DenseTensor value;
};

struct ntk_tucker {
  TuckerTensor value;
};

struct ntk_field {
  Shape shape;
  TensorField value;
};

struct ntk_report {
  ExperimentReport value;
  std::string csv;
};

namespace {

thread_local std::string last_error;

ntk_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return NTK_INVALID_ARGUMENT;
    case ErrorCode::shape_mismatch: return NTK_SHAPE_MISMATCH;
    case ErrorCode::contract_violation: return NTK_CONTRACT_VIOLATION;
    case ErrorCode::io: return NTK_IO;
    case ErrorCode::format: return NTK_FORMAT;
    case ErrorCode::resource: return NTK_RESOURCE;
    case ErrorCode::numerical: return NTK_NUMERICAL;
  }
  return NTK_INTERNAL;
}

template <class Fn>
ntk_status guarded(Fn&& fn) {
  try {
    fn();
    return NTK_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NTK_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NTK_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return NTK_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

std::vector<Index> to_index(const int64_t* v, std::size_t n, const char* what) {
  require(n == 0 || v != nullptr, ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
  return std::vector<Index>(v, v + n);
}

template <class T>
std::vector<T> to_vec(const T* v, std::size_t n, const char* what) {
  require(n == 0 || v != nullptr, ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
  return std::vector<T>(v, v + n);
}

Shape make_shape(std::size_t order, const int64_t* dims) {
  require(order >= 1, ErrorCode::invalid_argument, "tensor order must be at least 1");
  auto d = to_index(dims, order, "dims");
  for (Index x : d) require(x >= 1, ErrorCode::invalid_argument, "tensor extents must be positive");
  return Shape(std::move(d));
}

DenseTensor from_interleaved(const Shape& shape, const double* data) {
  DenseTensor t(shape);
  if (data) std::memcpy(static_cast<void*>(t.data().data()), data, sizeof(Scalar) * static_cast<std::size_t>(t.numel()));
  return t;
}

Progress wrap_progress(ntk_progress_fn fn, void* user) {
  if (!fn) return {};
  return [fn, user](const std::string& msg) { fn(user, msg.c_str()); };
}

void callback_ok(int rc) {
  require(rc == 0, ErrorCode::numerical, "field callback failed with code " + std::to_string(rc));
}

StepConfig make_config(const ntk_step_config* cfg) {
  need(cfg, "cfg");
  require(cfg->h > 0, ErrorCode::invalid_argument, "step size must be positive");
  require(cfg->inner_steps >= 0, ErrorCode::invalid_argument, "inner_steps must be nonnegative");
  StepConfig c;
  c.h = cfg->h;
  if (cfg->inner_steps == 0)
    c.solver = ExactIncrement{};
  else
    c.solver = Rk4{cfg->inner_steps};
  return c;
}

void check_pair(const ntk_tucker* y0, const ntk_field* field) {
  need(y0, "y0");
  need(field, "field");
  require(y0->value.ambient_shape() == field->shape, ErrorCode::shape_mismatch,
          "field shape " + to_string(field->shape) + " does not match tensor shape " +
              to_string(y0->value.ambient_shape()));
}

const uint64_t default_seeds[] = {1, 2, 3};
const int64_t exactness_shape[] = {20, 30, 40};
const int64_t exactness_ranks[] = {3, 4, 5};
const int64_t equivalence_shape[] = {8, 9, 10};
const int64_t equivalence_ranks[] = {3, 4, 2};
const double dnls_eps[] = {1e-2};
const double dnls_h[] = {1e-2};
const int64_t addition_shape[] = {100, 100, 100};
const int64_t addition_ranks[] = {10, 10, 10};
const double addition_norms[] = {1e0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

template <class Run, class Opts>
ntk_status run_report(ntk_report** out, Run run, const Opts& opts) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto rep = new ntk_report{run(opts), {}};
    rep->csv = rep->value.csv();
    *out = rep;
  });
}

}  // namespace

extern "C" {

const char* ntk_version(void) { return "0.1.0"; }
const char* ntk_last_error(void) { return last_error.c_str(); }

const char* ntk_status_name(ntk_status status) {
  switch (status) {
    case NTK_OK: return "ok";
    case NTK_INVALID_ARGUMENT: return "invalid argument";
    case NTK_SHAPE_MISMATCH: return "shape mismatch";
    case NTK_CONTRACT_VIOLATION: return "contract violation";
    case NTK_IO: return "i/o error";
    case NTK_FORMAT: return "format error";
    case NTK_RESOURCE: return "resource limit";
    case NTK_NUMERICAL: return "numerical failure";
    case NTK_INTERNAL: return "internal error";
  }
  return "unknown status";
}

ntk_status ntk_tensor_create(size_t order, const int64_t* dims, const double* data, ntk_tensor** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ntk_tensor{from_interleaved(make_shape(order, dims), data)};
  });
}

void ntk_tensor_free(ntk_tensor* t) { delete t; }
size_t ntk_tensor_order(const ntk_tensor* t) { return t ? static_cast<size_t>(t->value.order()) : 0; }

int64_t ntk_tensor_dim(const ntk_tensor* t, size_t mode) {
  if (!t || mode >= static_cast<size_t>(t->value.order())) return -1;
  return t->value.shape()[static_cast<Index>(mode)];
}

int64_t ntk_tensor_numel(const ntk_tensor* t) { return t ? t->value.numel() : 0; }

ntk_status ntk_tensor_copy_data(const ntk_tensor* t, double* out, size_t len) {
  return guarded([&] {
    need(t, "tensor");
    need(out, "out");
    const auto n = static_cast<size_t>(t->value.numel());
    require(len == 2 * n, ErrorCode::shape_mismatch,
            "buffer holds " + std::to_string(len) + " doubles, need " + std::to_string(2 * n));
    std::memcpy(out, static_cast<const void*>(t->value.data().data()), sizeof(Scalar) * n);
  });
}

double ntk_tensor_norm(const ntk_tensor* t) { return t ? fro_norm(t->value) : 0.0; }

ntk_status ntk_tensor_distance(const ntk_tensor* a, const ntk_tensor* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = fro_distance(a->value, b->value);
  });
}

ntk_status ntk_tensor_load(const char* path, ntk_tensor** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ntk_tensor{load_dense(path)};
  });
}

ntk_status ntk_tensor_save(const ntk_tensor* t, const char* path) {
  return guarded([&] {
    need(t, "tensor");
    need(path, "path");
    save_dense(t->value, path);
  });
}

ntk_status ntk_tucker_hosvd(const ntk_tensor* x, const int64_t* ranks, size_t n_ranks, ntk_tucker** out) {
  return guarded([&] {
    need(x, "tensor");
    need(out, "out");
    require(n_ranks == static_cast<size_t>(x->value.order()), ErrorCode::invalid_argument,
            "need one rank per mode");
    const auto r = to_index(ranks, n_ranks, "ranks");
    for (size_t i = 0; i < n_ranks; ++i)
      require(r[i] >= 1 && r[i] <= x->value.shape()[static_cast<Index>(i)], ErrorCode::invalid_argument,
              "rank " + std::to_string(r[i]) + " out of range for mode " + std::to_string(i));
    TuckerTensor y = hosvd_truncate(x->value, r);
    y.validate();
    *out = new ntk_tucker{std::move(y)};
  });
}

ntk_status ntk_tucker_to_dense(const ntk_tucker* y, ntk_tensor** out) {
  return guarded([&] {
    need(y, "tucker");
    need(out, "out");
    *out = new ntk_tensor{y->value.dense()};
  });
}

ntk_status ntk_tucker_load(const char* path, ntk_tucker** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ntk_tucker{load_tucker(path)};
  });
}

ntk_status ntk_tucker_save(const ntk_tucker* y, const char* path) {
  return guarded([&] {
    need(y, "tucker");
    need(path, "path");
    save_tucker(y->value, path);
  });
}

void ntk_tucker_free(ntk_tucker* y) { delete y; }
size_t ntk_tucker_order(const ntk_tucker* y) { return y ? static_cast<size_t>(y->value.order()) : 0; }

int64_t ntk_tucker_dim(const ntk_tucker* y, size_t mode) {
  if (!y || mode >= y->value.factors.size()) return -1;
  return y->value.factors[mode].rows();
}

int64_t ntk_tucker_rank(const ntk_tucker* y, size_t mode) {
  if (!y || mode >= y->value.factors.size()) return -1;
  return y->value.factors[mode].cols();
}

ntk_status ntk_field_from_rhs(size_t order, const int64_t* dims, ntk_rhs_fn f, void* user, ntk_field** out) {
  return guarded([&] {
    need(out, "out");
    need(reinterpret_cast<const void*>(f), "rhs callback");
    Shape shape = make_shape(order, dims);
    TensorBlackBox box{[f, user, shape](double t, const DenseTensor& y) {
      require(y.shape() == shape, ErrorCode::shape_mismatch, "field evaluated on a tensor of the wrong shape");
      DenseTensor out(shape);
      callback_ok(f(user, t, reinterpret_cast<const double*>(y.data().data()),
                    reinterpret_cast<double*>(out.data().data()), out.numel()));
      return out;
    }};
    *out = new ntk_field{shape, std::move(box)};
  });
}

ntk_status ntk_field_from_path(size_t order, const int64_t* dims, ntk_path_fn value, ntk_path_fn derivative,
                               void* user, ntk_field** out) {
  return guarded([&] {
    need(out, "out");
    need(reinterpret_cast<const void*>(value), "path callback");
    Shape shape = make_shape(order, dims);
    auto sample = [shape, user](ntk_path_fn fn) {
      return [fn, shape, user](double t) {
        DenseTensor out(shape);
        callback_ok(fn(user, t, reinterpret_cast<double*>(out.data().data()), out.numel()));
        return out;
      };
    };
    TensorPath path;
    path.value = sample(value);
    if (derivative) path.derivative = sample(derivative);
    *out = new ntk_field{shape, std::move(path)};
  });
}

ntk_status ntk_field_dnls(int64_t n, double epsilon, int symmetric_gaussian, ntk_field** out) {
  return guarded([&] {
    need(out, "out");
    const DnlsParams p = DnlsParams::for_lattice(n, epsilon, symmetric_gaussian != 0);
    p.validate();
    *out = new ntk_field{Shape{n, n, n}, dnls_field(p)};
  });
}

void ntk_field_free(ntk_field* f) { delete f; }

ntk_step_config ntk_step_config_default(void) { return ntk_step_config{0.1, 1}; }

ntk_status ntk_step(ntk_method method, const ntk_tucker* y0, const ntk_field* field, double t0, double t1,
                    const ntk_step_config* cfg, ntk_tucker** out) {
  return guarded([&] {
    need(out, "out");
    check_pair(y0, field);
    const StepConfig c = make_config(cfg);
    TuckerTensor y = method == NTK_CLASSIC ? classic_step(y0->value, field->value, t0, t1, c)
                                           : nested_step(y0->value, field->value, t0, t1, c);
    *out = new ntk_tucker{std::move(y)};
  });
}

ntk_status ntk_integrate(ntk_method method, const ntk_tucker* y0, const ntk_field* field, double t0, double t_end,
                         int64_t n_steps, const ntk_step_config* cfg, ntk_tucker** out) {
  return guarded([&] {
    need(out, "out");
    check_pair(y0, field);
    const StepConfig c = make_config(cfg);
    TuckerTensor y = integrate(y0->value, field->value, t0, t_end, n_steps, c,
                               method == NTK_CLASSIC ? Method::classic : Method::nested);
    *out = new ntk_tucker{std::move(y)};
  });
}

ntk_exactness_options ntk_exactness_options_default(void) {
  return {default_seeds, 3, exactness_shape, 3, exactness_ranks, 0.1, 1};
}

ntk_equivalence_options ntk_equivalence_options_default(void) {
  return {default_seeds, 3, equivalence_shape, 3, equivalence_ranks, 0.1, 10};
}

ntk_dnls_options ntk_dnls_options_default(void) {
  ntk_dnls_options o{};
  o.n = 40;
  o.eps = dnls_eps;
  o.n_eps = 1;
  o.h = dnls_h;
  o.n_h = 1;
  o.ranks[0] = o.ranks[1] = o.ranks[2] = 10;
  o.t_end = 1.0;
  o.inner_steps = 0;
  o.inner_h = 1e-3;
  o.reference_h = 0.5e-3;
  return o;
}

ntk_addition_options ntk_addition_options_default(void) {
  return {1, addition_shape, 3, addition_ranks, addition_norms, 7, nullptr, nullptr};
}

ntk_status ntk_run_exactness(const ntk_exactness_options* opts, ntk_report** out) {
  return run_report(out, [](const ntk_exactness_options* o) {
    need(o, "options");
    ExactnessOptions e;
    e.seeds = to_vec(o->seeds, o->n_seeds, "seeds");
    e.shape = to_index(o->shape, o->order, "shape");
    e.ranks = to_index(o->ranks, o->order, "ranks");
    e.h = o->h;
    e.include_flip = o->include_flip != 0;
    return run_exactness(e);
  }, opts);
}

ntk_status ntk_run_equivalence(const ntk_equivalence_options* opts, ntk_report** out) {
  return run_report(out, [](const ntk_equivalence_options* o) {
    need(o, "options");
    EquivalenceOptions e;
    e.seeds = to_vec(o->seeds, o->n_seeds, "seeds");
    e.shape = to_index(o->shape, o->order, "shape");
    e.ranks = to_index(o->ranks, o->order, "ranks");
    e.h = o->h;
    e.inner_steps = o->inner_steps;
    return run_equivalence(e);
  }, opts);
}

ntk_status ntk_run_dnls_table(const ntk_dnls_options* opts, ntk_report** out) {
  return run_report(out, [](const ntk_dnls_options* o) {
    need(o, "options");
    DnlsTableOptions d;
    d.n = o->n;
    d.eps = to_vec(o->eps, o->n_eps, "eps");
    d.h = to_vec(o->h, o->n_h, "h");
    d.ranks = to_index(o->ranks, 3, "ranks");
    d.t_end = o->t_end;
    d.inner_steps = o->inner_steps;
    d.inner_h = o->inner_h;
    d.reference_h = o->reference_h;
    d.symmetric_gaussian = o->symmetric_gaussian != 0;
    d.memory_limit_bytes = o->memory_limit_bytes;
    d.progress = wrap_progress(o->progress, o->progress_user);
    return run_dnls_table(d);
  }, opts);
}

ntk_status ntk_run_addition(const ntk_addition_options* opts, ntk_report** out) {
  return run_report(out, [](const ntk_addition_options* o) {
    need(o, "options");
    AdditionOptions a;
    a.seed = o->seed;
    a.shape = to_index(o->shape, o->order, "shape");
    a.ranks = to_index(o->ranks, o->order, "ranks");
    a.norms = to_vec(o->norms, o->n_norms, "norms");
    a.progress = wrap_progress(o->progress, o->progress_user);
    return run_addition(a);
  }, opts);
}

const char* ntk_report_name(const ntk_report* r) { return r ? r->value.name.c_str() : ""; }
const char* ntk_report_csv(const ntk_report* r) { return r ? r->csv.c_str() : ""; }
size_t ntk_report_rows(const ntk_report* r) { return r ? r->value.rows.size() : 0; }
size_t ntk_report_cols(const ntk_report* r) { return r ? r->value.columns.size() : 0; }

const char* ntk_report_column_name(const ntk_report* r, size_t col) {
  if (!r || col >= r->value.columns.size()) return nullptr;
  return r->value.columns[col].name.c_str();
}

ntk_status ntk_report_value(const ntk_report* r, size_t row, size_t col, double* out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    require(row < r->value.rows.size() && col < r->value.columns.size(), ErrorCode::invalid_argument,
            "report cell out of range");
    *out = r->value.rows[row][col];
  });
}

double ntk_report_seconds(const ntk_report* r, size_t row) {
  if (!r || row >= r->value.seconds.size()) return 0.0;
  return r->value.seconds[row];
}

size_t ntk_report_metadata_count(const ntk_report* r) { return r ? r->value.metadata.size() : 0; }

const char* ntk_report_metadata_key(const ntk_report* r, size_t i) {
  if (!r || i >= r->value.metadata.size()) return nullptr;
  return r->value.metadata[i].first.c_str();
}

const char* ntk_report_metadata_value(const ntk_report* r, size_t i) {
  if (!r || i >= r->value.metadata.size()) return nullptr;
  return r->value.metadata[i].second.c_str();
}

void ntk_report_free(ntk_report* r) { delete r; }

ntk_status ntk_convert(const char* in_path, const char* out_path, const int64_t* ranks, size_t n_ranks,
                       ntk_file_kind* written) {
  return guarded([&] {
    need(in_path, "in_path");
    need(out_path, "out_path");
    ntk_file_kind kind;
    if (sniff_kind(in_path) == FileKind::tucker) {
      require(n_ranks == 0, ErrorCode::invalid_argument, "ranks only apply to dense input");
      save_dense(load_tucker(in_path).dense(), out_path);
      kind = NTK_FILE_DENSE;
    } else if (n_ranks > 0) {
      const DenseTensor x = load_dense(in_path);
      require(n_ranks == static_cast<size_t>(x.order()), ErrorCode::invalid_argument,
              "need " + std::to_string(x.order()) + " ranks for an order-" + std::to_string(x.order()) + " tensor");
      const auto r = to_index(ranks, n_ranks, "ranks");
      for (size_t i = 0; i < n_ranks; ++i)
        require(r[i] >= 1 && r[i] <= x.shape()[static_cast<Index>(i)], ErrorCode::invalid_argument,
                "rank " + std::to_string(r[i]) + " out of range for mode " + std::to_string(i));
      save_tucker(hosvd_truncate(x, r), out_path);
      kind = NTK_FILE_TUCKER;
    } else {
      save_dense(load_dense(in_path), out_path);
      kind = NTK_FILE_DENSE;
    }
    if (written) *written = kind;
  });
}

}  // extern "C"
