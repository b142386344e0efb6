// Command-line driver: runs the experiments through the C interface and
// writes their tables as CSV.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ntucker/ntucker.h"

namespace {

constexpr int exit_other = 1;
constexpr int exit_validation = 2;
constexpr int exit_resource = 3;

int exit_code(ntk_status s) {
  switch (s) {
    case NTK_OK: return 0;
    case NTK_INVALID_ARGUMENT:
    case NTK_SHAPE_MISMATCH:
    case NTK_CONTRACT_VIOLATION:
    case NTK_FORMAT: return exit_validation;
    case NTK_RESOURCE: return exit_resource;
    default: return exit_other;
  }
}

int report_failure(ntk_status s) {
  std::cerr << "error (" << ntk_status_name(s) << "): " << ntk_last_error() << '\n';
  return exit_code(s);
}

void progress(void*, const char* msg) { std::cerr << msg << std::endl; }

struct Common {
  std::string out;
  bool quiet = false;
};

int emit(ntk_status s, ntk_report* rep, const Common& common) {
  if (s != NTK_OK) return report_failure(s);
  const std::string csv = ntk_report_csv(rep);
  if (!common.quiet) {
    std::cerr << "# " << ntk_report_name(rep);
    for (size_t i = 0; i < ntk_report_metadata_count(rep); ++i)
      std::cerr << ' ' << ntk_report_metadata_key(rep, i) << '=' << ntk_report_metadata_value(rep, i);
    double total = 0;
    for (size_t r = 0; r < ntk_report_rows(rep); ++r) total += ntk_report_seconds(rep, r);
    std::cerr << " seconds=" << total << '\n';
  }
  ntk_report_free(rep);
  if (common.out.empty()) {
    std::cout << csv;
    return 0;
  }
  std::ofstream f(common.out, std::ios::binary);
  f << csv;
  if (!f) {
    std::cerr << "error: cannot write " << common.out << '\n';
    return exit_other;
  }
  return 0;
}

std::vector<uint64_t> seed_range(uint64_t first, uint64_t count) {
  std::vector<uint64_t> seeds;
  for (uint64_t i = 0; i < count; ++i) seeds.push_back(first + i);
  return seeds;
}

void add_output(CLI::App* app, Common& common) {
  app->add_option("--out", common.out, "Write CSV to FILE.csv instead of stdout");
  app->add_flag("-q,--quiet", common.quiet, "Suppress progress and summary on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested Tucker integrator experiments"};
  app.require_subcommand(1);
  // --h is the step size, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(ntk_version()));
  Common common;

  // exactness
  uint64_t seed = 1, count = 20;
  std::vector<int64_t> shape, ranks;
  double h = 0.1;
  bool no_flip = false;
  auto* exact = app.add_subcommand("exactness", "One nested step along exact-rank paths");
  exact->add_option("--seed", seed, "First seed")->capture_default_str();
  exact->add_option("--count", count, "Number of consecutive seeds")->capture_default_str();
  exact->add_option("--shape", shape, "Tensor shape n1,n2[,n3...] (default 20,30,40)")->delimiter(',');
  exact->add_option("--ranks", ranks, "Ranks r1,r2[,r3...] (default 3,4,5)")->delimiter(',');
  exact->add_option("--h", h, "Step size")->capture_default_str();
  exact->add_flag("--no-flip", no_flip, "Skip the path with singular co-range overlap");
  add_output(exact, common);

  // equivalence
  int64_t inner_steps = -1;
  auto* equiv = app.add_subcommand("equivalence", "Nested versus classic Tucker step");
  equiv->add_option("--seed", seed, "First seed")->capture_default_str();
  equiv->add_option("--count", count, "Number of consecutive seeds")->capture_default_str();
  equiv->add_option("--shape", shape, "Tensor shape (default 8,9,10)")->delimiter(',');
  equiv->add_option("--ranks", ranks, "Ranks (default 3,4,2)")->delimiter(',');
  equiv->add_option("--h", h, "Step size")->capture_default_str();
  equiv->add_option("--inner-steps", inner_steps, "RK4 steps per substep (default 10)");
  add_output(equiv, common);

  // dnls-table
  ntk_dnls_options dnls = ntk_dnls_options_default();
  int64_t n = -1;
  std::vector<double> eps_list, h_list;
  double t_end = dnls.t_end, inner_h = dnls.inner_h, reference_h = dnls.reference_h;
  bool full = false, symmetric = false;
  auto* table = app.add_subcommand("dnls-table", "Nested integrator on the DNLS lattice against a dense reference");
  table->add_option("--n", n, "Lattice extent per mode (default 40, 100 with --full)");
  table->add_option("--eps", eps_list, "Nonlinearity strengths e1,e2,...")->delimiter(',');
  table->add_option("--h", h_list, "Outer step sizes h1,h2,...")->delimiter(',');
  table->add_option("--ranks", ranks, "Ranks r1,r2,r3 (default 10,10,10)")->delimiter(',');
  table->add_option("--t-end", t_end, "Final time")->capture_default_str();
  auto* steps_opt = table->add_option("--inner-steps", inner_steps, "Fixed RK4 steps per substep");
  table->add_option("--inner-h", inner_h, "RK4 resolution inside substeps")->capture_default_str()->excludes(steps_opt);
  table->add_option("--reference-h", reference_h, "Step of the dense RK4 reference")->capture_default_str();
  table->add_flag("--full", full, "Full 100^3 lattice and the complete eps x h grid");
  table->add_flag("--symmetric-gaussian", symmetric, "Use all-positive signs in the initial Gaussians");
  add_output(table, common);

  // addition
  std::vector<double> norms;
  auto* add = app.add_subcommand("addition", "One step with a constant tangent increment versus HOSVD truncation");
  add->add_option("--seed", seed, "Seed")->capture_default_str();
  add->add_option("--n", n, "Extent per mode (default 100)");
  add->add_option("--ranks", ranks, "Ranks r1,r2,r3 (default 10,10,10)")->delimiter(',');
  add->add_option("--norms", norms, "Increment norms, strictly descending")->delimiter(',');
  add_output(add, common);

  // convert
  std::string in_path, out_path;
  auto* conv = app.add_subcommand("convert", "Convert between DTF1 (dense) and TKF1 (Tucker) files");
  conv->add_option("input", in_path, "Input file")->required();
  conv->add_option("output", out_path, "Output file")->required();
  conv->add_option("--ranks", ranks, "HOSVD ranks for dense input")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation;
  }

  ntk_report* rep = nullptr;
  const auto seeds = seed_range(seed, count);

  if (*exact) {
    ntk_exactness_options o = ntk_exactness_options_default();
    o.seeds = seeds.data();
    o.n_seeds = seeds.size();
    if (!shape.empty() || !ranks.empty()) {
      if (shape.empty() || shape.size() != ranks.size()) {
        std::cerr << "error: --shape and --ranks must be given together with equal lengths\n";
        return exit_validation;
      }
      o.shape = shape.data();
      o.ranks = ranks.data();
      o.order = shape.size();
    }
    o.h = h;
    o.include_flip = no_flip ? 0 : 1;
    const ntk_status s = ntk_run_exactness(&o, &rep);
    return emit(s, rep, common);
  }

  if (*equiv) {
    ntk_equivalence_options o = ntk_equivalence_options_default();
    o.seeds = seeds.data();
    o.n_seeds = seeds.size();
    if (!shape.empty() || !ranks.empty()) {
      if (shape.empty() || shape.size() != ranks.size()) {
        std::cerr << "error: --shape and --ranks must be given together with equal lengths\n";
        return exit_validation;
      }
      o.shape = shape.data();
      o.ranks = ranks.data();
      o.order = shape.size();
    }
    o.h = h;
    if (inner_steps >= 0) o.inner_steps = inner_steps;
    const ntk_status s = ntk_run_equivalence(&o, &rep);
    return emit(s, rep, common);
  }

  if (*table) {
    static const double full_eps[] = {1, 1e-1, 1e-2, 1e-3, 1e-4};
    static const double full_h[] = {1, 1e-1, 1e-2, 1e-3};
    dnls.n = n > 0 ? n : (full ? 100 : dnls.n);
    if (n == 0 || n < -1) {
      std::cerr << "error: --n must be positive\n";
      return exit_validation;
    }
    if (!eps_list.empty()) {
      dnls.eps = eps_list.data();
      dnls.n_eps = eps_list.size();
    } else if (full) {
      dnls.eps = full_eps;
      dnls.n_eps = std::size(full_eps);
    }
    if (!h_list.empty()) {
      dnls.h = h_list.data();
      dnls.n_h = h_list.size();
    } else if (full) {
      dnls.h = full_h;
      dnls.n_h = std::size(full_h);
    }
    if (!ranks.empty()) {
      if (ranks.size() != 3) {
        std::cerr << "error: --ranks needs three values\n";
        return exit_validation;
      }
      for (int i = 0; i < 3; ++i) dnls.ranks[i] = ranks[static_cast<size_t>(i)];
    }
    dnls.t_end = t_end;
    if (inner_steps >= 0) {
      if (inner_steps == 0) {
        std::cerr << "error: --inner-steps must be positive\n";
        return exit_validation;
      }
      dnls.inner_steps = inner_steps;
    }
    dnls.inner_h = inner_h;
    dnls.reference_h = reference_h;
    dnls.symmetric_gaussian = symmetric ? 1 : 0;
    if (!common.quiet) dnls.progress = progress;
    const ntk_status s = ntk_run_dnls_table(&dnls, &rep);
    return emit(s, rep, common);
  }

  if (*add) {
    ntk_addition_options o = ntk_addition_options_default();
    o.seed = seed;
    std::vector<int64_t> dims;
    if (n > 0) {
      dims.assign(3, n);
      o.shape = dims.data();
    } else if (n != -1) {
      std::cerr << "error: --n must be positive\n";
      return exit_validation;
    }
    if (!ranks.empty()) {
      if (ranks.size() != 3) {
        std::cerr << "error: --ranks needs three values\n";
        return exit_validation;
      }
      o.ranks = ranks.data();
    }
    if (!norms.empty()) {
      o.norms = norms.data();
      o.n_norms = norms.size();
    }
    if (!common.quiet) o.progress = progress;
    const ntk_status s = ntk_run_addition(&o, &rep);
    return emit(s, rep, common);
  }

  if (*conv) {
    ntk_file_kind kind;
    const ntk_status s = ntk_convert(in_path.c_str(), out_path.c_str(), ranks.data(), ranks.size(), &kind);
    if (s != NTK_OK) return report_failure(s);
    std::cerr << "wrote " << (kind == NTK_FILE_TUCKER ? "TKF1" : "DTF1") << " file " << out_path << '\n';
    return 0;
  }
  return exit_other;
}
