#ifndef NTUCKER_H
#define NTUCKER_H

/* C interface to the ntucker library.
 *
 * Objects are opaque handles created by ntk_*_create/load/... and released
 * with the matching ntk_*_free. Every fallible call returns an ntk_status;
 * on failure ntk_last_error() describes the problem (thread local, valid
 * until the next failing call on the same thread).
 *
 * Complex data crosses the boundary as interleaved (re, im) doubles in
 * colexicographic order (first index fastest). Modes are 0-based. */

#include <stddef.h>
#include <stdint.h>

#if defined(NTK_BUILDING_LIBRARY)
#define NTK_API __attribute__((visibility("default")))
#else
#define NTK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ntk_status {
  NTK_OK = 0,
  NTK_INVALID_ARGUMENT = 1,
  NTK_SHAPE_MISMATCH = 2,
  NTK_CONTRACT_VIOLATION = 3,
  NTK_IO = 4,
  NTK_FORMAT = 5,
  NTK_RESOURCE = 6,
  NTK_NUMERICAL = 7,
  NTK_INTERNAL = 99
} ntk_status;

typedef enum ntk_method { NTK_NESTED = 0, NTK_CLASSIC = 1 } ntk_method;
typedef enum ntk_file_kind { NTK_FILE_DENSE = 0, NTK_FILE_TUCKER = 1 } ntk_file_kind;

typedef struct ntk_tensor ntk_tensor;
typedef struct ntk_tucker ntk_tucker;
typedef struct ntk_field ntk_field;
typedef struct ntk_report ntk_report;

NTK_API const char* ntk_version(void);
NTK_API const char* ntk_last_error(void);
NTK_API const char* ntk_status_name(ntk_status status);

/* Dense tensors. `data` may be NULL for a zero tensor. */
NTK_API ntk_status ntk_tensor_create(size_t order, const int64_t* dims, const double* data, ntk_tensor** out);
NTK_API void ntk_tensor_free(ntk_tensor* t);
NTK_API size_t ntk_tensor_order(const ntk_tensor* t);
NTK_API int64_t ntk_tensor_dim(const ntk_tensor* t, size_t mode);
NTK_API int64_t ntk_tensor_numel(const ntk_tensor* t);
/* `len` counts doubles and must be 2 * numel. */
NTK_API ntk_status ntk_tensor_copy_data(const ntk_tensor* t, double* out, size_t len);
NTK_API double ntk_tensor_norm(const ntk_tensor* t);
NTK_API ntk_status ntk_tensor_distance(const ntk_tensor* a, const ntk_tensor* b, double* out);
NTK_API ntk_status ntk_tensor_load(const char* path, ntk_tensor** out);
NTK_API ntk_status ntk_tensor_save(const ntk_tensor* t, const char* path);

/* Tucker tensors. */
NTK_API ntk_status ntk_tucker_hosvd(const ntk_tensor* x, const int64_t* ranks, size_t n_ranks, ntk_tucker** out);
NTK_API ntk_status ntk_tucker_to_dense(const ntk_tucker* y, ntk_tensor** out);
NTK_API ntk_status ntk_tucker_load(const char* path, ntk_tucker** out);
NTK_API ntk_status ntk_tucker_save(const ntk_tucker* y, const char* path);
NTK_API void ntk_tucker_free(ntk_tucker* y);
NTK_API size_t ntk_tucker_order(const ntk_tucker* y);
NTK_API int64_t ntk_tucker_dim(const ntk_tucker* y, size_t mode);
NTK_API int64_t ntk_tucker_rank(const ntk_tucker* y, size_t mode);

/* Right-hand sides. Callbacks return 0 on success; any other value aborts
 * the computation with NTK_NUMERICAL. */
typedef int (*ntk_rhs_fn)(void* user, double t, const double* y, double* out, int64_t numel);
typedef int (*ntk_path_fn)(void* user, double t, double* out, int64_t numel);

NTK_API ntk_status ntk_field_from_rhs(size_t order, const int64_t* dims, ntk_rhs_fn f, void* user, ntk_field** out);
/* F(t, Y) = dA/dt for the explicit path A. `derivative` may be NULL, in
 * which case only exact-increment substeps are available. */
NTK_API ntk_status ntk_field_from_path(size_t order, const int64_t* dims, ntk_path_fn value, ntk_path_fn derivative,
                                       void* user, ntk_field** out);
NTK_API ntk_status ntk_field_dnls(int64_t n, double epsilon, int symmetric_gaussian, ntk_field** out);
NTK_API void ntk_field_free(ntk_field* f);

typedef struct ntk_step_config {
  double h;
  /* RK4 steps per substep; 0 selects exact increments of an explicit path. */
  int64_t inner_steps;
} ntk_step_config;

NTK_API ntk_step_config ntk_step_config_default(void);
NTK_API ntk_status ntk_step(ntk_method method, const ntk_tucker* y0, const ntk_field* field, double t0, double t1,
                            const ntk_step_config* cfg, ntk_tucker** out);
NTK_API ntk_status ntk_integrate(ntk_method method, const ntk_tucker* y0, const ntk_field* field, double t0,
                                 double t_end, int64_t n_steps, const ntk_step_config* cfg, ntk_tucker** out);

/* Experiments. Array members are borrowed for the duration of the call. */
typedef void (*ntk_progress_fn)(void* user, const char* message);

typedef struct ntk_exactness_options {
  const uint64_t* seeds;
  size_t n_seeds;
  const int64_t* shape;
  size_t order;
  const int64_t* ranks;
  double h;
  int include_flip;
} ntk_exactness_options;

typedef struct ntk_equivalence_options {
  const uint64_t* seeds;
  size_t n_seeds;
  const int64_t* shape;
  size_t order;
  const int64_t* ranks;
  double h;
  int64_t inner_steps;
} ntk_equivalence_options;

typedef struct ntk_dnls_options {
  int64_t n;
  const double* eps;
  size_t n_eps;
  const double* h;
  size_t n_h;
  int64_t ranks[3];
  double t_end;
  int64_t inner_steps; /* 0: derived from inner_h */
  double inner_h;
  double reference_h;
  int symmetric_gaussian;
  uint64_t memory_limit_bytes; /* 0: physical memory */
  ntk_progress_fn progress;
  void* progress_user;
} ntk_dnls_options;

typedef struct ntk_addition_options {
  uint64_t seed;
  const int64_t* shape;
  size_t order;
  const int64_t* ranks;
  const double* norms;
  size_t n_norms;
  ntk_progress_fn progress;
  void* progress_user;
} ntk_addition_options;

/* Defaults point at static arrays owned by the library. */
NTK_API ntk_exactness_options ntk_exactness_options_default(void);
NTK_API ntk_equivalence_options ntk_equivalence_options_default(void);
NTK_API ntk_dnls_options ntk_dnls_options_default(void);
NTK_API ntk_addition_options ntk_addition_options_default(void);

NTK_API ntk_status ntk_run_exactness(const ntk_exactness_options* opts, ntk_report** out);
NTK_API ntk_status ntk_run_equivalence(const ntk_equivalence_options* opts, ntk_report** out);
NTK_API ntk_status ntk_run_dnls_table(const ntk_dnls_options* opts, ntk_report** out);
NTK_API ntk_status ntk_run_addition(const ntk_addition_options* opts, ntk_report** out);

/* Reports. Returned strings are owned by the report. */
NTK_API const char* ntk_report_name(const ntk_report* r);
NTK_API const char* ntk_report_csv(const ntk_report* r);
NTK_API size_t ntk_report_rows(const ntk_report* r);
NTK_API size_t ntk_report_cols(const ntk_report* r);
NTK_API const char* ntk_report_column_name(const ntk_report* r, size_t col);
NTK_API ntk_status ntk_report_value(const ntk_report* r, size_t row, size_t col, double* out);
NTK_API double ntk_report_seconds(const ntk_report* r, size_t row);
NTK_API size_t ntk_report_metadata_count(const ntk_report* r);
NTK_API const char* ntk_report_metadata_key(const ntk_report* r, size_t i);
NTK_API const char* ntk_report_metadata_value(const ntk_report* r, size_t i);
NTK_API void ntk_report_free(ntk_report* r);

/* File conversion. A dense input with ranks becomes a Tucker file (HOSVD);
 * a Tucker input becomes a dense file; a dense input without ranks is
 * rewritten as dense. `written` (may be NULL) receives the output kind. */
NTK_API ntk_status ntk_convert(const char* in_path, const char* out_path, const int64_t* ranks, size_t n_ranks,
                               ntk_file_kind* written);

#ifdef __cplusplus
}
#endif

#endif
