#pragma once

// Drivers for the exactness, equivalence, DNLS and tensor-addition studies.
// Each returns a report whose CSV rendering is byte-reproducible for a fixed
// configuration; wall-clock times are kept beside the table, not in it.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ntucker/models.hpp"
#include "ntucker/tensor.hpp"

namespace ntucker {

struct ExperimentReport {
  struct Column {
    std::string name;
    bool integer = false;  // printed without exponent (grid axes such as seeds)
  };

  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<double> seconds;  // one per row

  Index column(const std::string& col) const;
  double value(std::size_t row, const std::string& col) const;
  std::vector<double> values(const std::string& col) const;

  // Throws unless every row has one entry per column and all are finite.
  void validate() const;
  std::string csv() const;
};

// Least-squares slope of log10(y) against log10(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

using Progress = std::function<void(const std::string&)>;

struct ExactnessOptions {
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<Index> shape{20, 30, 40};
  std::vector<Index> ranks{3, 4, 5};
  double h = 0.1;
  // Also run a path violating the co-range invertibility hypothesis.
  bool include_flip = true;
};

// Columns: seed, error, flip_error. Order-2 shapes exercise the matrix KSL
// integrator directly (ranks must then be equal).
ExperimentReport run_exactness(const ExactnessOptions& opts);

struct EquivalenceOptions {
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<Index> shape{8, 9, 10};
  std::vector<Index> ranks{3, 4, 2};
  double h = 0.1;
  std::int64_t inner_steps = 10;
};

// Columns: seed, difference (relative, nested vs classic).
ExperimentReport run_equivalence(const EquivalenceOptions& opts);

struct DnlsTableOptions {
  Index n = 40;
  std::vector<double> eps{1e-2};
  std::vector<double> h{1e-2};
  std::vector<Index> ranks{10, 10, 10};
  double t_end = 1.0;
  // Inner RK4 steps per substep; when 0, derived from inner_h.
  std::int64_t inner_steps = 0;
  double inner_h = 1e-3;
  double reference_h = 0.5e-3;
  bool symmetric_gaussian = false;
  // Upper bound for the working set; 0 means physical memory.
  std::uint64_t memory_limit_bytes = 0;
  Progress progress;
};

// Columns: eps, h, error, relative_error, reference_norm.
ExperimentReport run_dnls_table(const DnlsTableOptions& opts);

struct AdditionOptions {
  std::uint64_t seed = 1;
  std::vector<Index> shape{100, 100, 100};
  std::vector<Index> ranks{10, 10, 10};
  std::vector<double> norms{1e0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  Progress progress;
};

// Columns: norm, integrator_error, hosvd_error, ratio.
ExperimentReport run_addition(const AdditionOptions& opts);

// Inner RK4 step count for an outer step h at inner resolution inner_h.
std::int64_t inner_steps_for(double h, double inner_h);

// Seeded smooth black-box field: Σ_i Y ×_i M_i + ½ |Y|² ⊙ Y + cos(t) G.
TensorField random_smooth_field(std::uint64_t seed, const Shape& shape);

}  // namespace ntucker
