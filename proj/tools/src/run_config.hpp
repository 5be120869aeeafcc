#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mlsm::cli {

/// Everything one `run` invocation needs. Unset optionals take the case default.
struct RunConfig {
  std::string case_name;
  std::string out_dir;

  std::optional<std::size_t> nx;
  std::optional<std::string> basis;  // m9, g9, m6
  double sigma_b = 1.0;
  std::optional<std::size_t> support_size;
  double sigma_w = 1.0;
  std::optional<std::string> rank_policy;  // strict, min-norm, grow

  std::optional<std::size_t> refine_levels;
  std::size_t secondary_levels = 0;
  bool full_schedule = false;
  std::optional<double> height_over_b;

  std::optional<double> perturbation;
  std::uint64_t seed = 1;
  std::optional<std::size_t> relax_iterations;
  std::optional<double> relax_step;
  bool all_essential = false;
  double load_scale = 1.0;

  std::string solver = "bicgstab";
  double tolerance = 1e-10;
  std::size_t max_iterations = 0;
  double ilut_fill = 40.0;
  double ilut_drop = 1e-5;
  unsigned threads = 1;

  std::vector<std::size_t> sweep_nx;
  std::vector<double> sweep_perturbation;
  std::vector<std::uint64_t> sweep_seed;
  std::vector<std::size_t> sweep_refine_levels;

  bool vtk = false;
  bool dump_matrix = false;
  bool dump_stencils = false;
};

inline constexpr const char* kOutputDirEnv = "MLSM_OUTPUT_DIR";

/// Adds the `run` options, including `--config` for a TOML/INI file whose keys
/// match the long option names. Command-line values take precedence over the file.
void add_run_options(CLI::App& app, RunConfig& config);

/// Every problem with the configuration; empty when it can be executed.
std::vector<std::string> validate(const RunConfig& config);

}  // namespace mlsm::cli
