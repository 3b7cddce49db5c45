#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include <nlohmann/json.hpp>

#include "holosep/holonomy.hpp"
#include "holosep/lambda_system.hpp"

namespace holosep::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNonSeparable = 1;
inline constexpr int kExitCovarianceViolation = 1;
inline constexpr int kExitInPhase = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitIo = 4;

inline constexpr std::size_t kDefaultSteps = 4096;

struct Overrides {
  std::optional<std::size_t> steps;
  std::optional<double> tau;
  std::optional<std::uint64_t> seed;
};

struct RunConfig {
  HamiltonianSpec system;
  ComplexMatrix initial_frame;
  SectionRule section;
  double tau = 0.0;
  std::size_t steps = kDefaultSteps;
  Tolerances tolerances;
  std::optional<std::uint64_t> seed;
  std::optional<lambda::LambdaParams> lambda;

  TimeGrid grid() const { return TimeGrid::uniform(tau, steps); }
};

// Strict parsing: unknown keys and inconsistent dimensions raise ConfigError.
// Relative file references resolve against `base_dir`.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                       const Overrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

struct PipelineResult {
  FramePath schrodinger;
  SectionPath section;
};

PipelineResult run_pipeline(const RunConfig& config);

// Complex entries as [re, im]; matrices as row-major nested arrays.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
// Accepts nested rows or a flat row-major list of [re, im] pairs (then rows x cols must be given).
ComplexMatrix matrix_from_json(const nlohmann::json& j, const char* what, Index rows = -1,
                               Index cols = -1);

nlohmann::json report_to_json(const DecompositionReport& report);
DecompositionReport report_from_json(const nlohmann::json& j);

// {"dimension": N, "times": [...], "matrices": [...]}
HamiltonianSpec load_sampled_hamiltonian(const std::filesystem::path& path,
                                         const Tolerances& tol = {});
FramePath load_frame_path(const std::filesystem::path& path, const Tolerances& tol = {});

struct DemoOptions {
  std::optional<double> delta;
  std::optional<double> omega0;
  std::optional<double> eta;
  std::optional<double> tau;
  std::size_t steps = kDefaultSteps;
};

int cmd_decompose(const std::filesystem::path& config_path, const std::filesystem::path& out_path,
                  const Overrides& overrides, std::ostream& out, std::ostream& err);
int cmd_demo(lambda::Case which, const DemoOptions& options, std::ostream& out, std::ostream& err);
int cmd_separability(const std::filesystem::path& config_path, const Overrides& overrides,
                     std::ostream& out, std::ostream& err);
int cmd_export(const std::filesystem::path& config_path, const std::filesystem::path& out_csv,
               const Overrides& overrides, std::ostream& out, std::ostream& err);
int cmd_gauge_check(const std::filesystem::path& config_path, std::uint64_t seed,
                    const Overrides& overrides, std::ostream& out, std::ostream& err);

// Default parameters of the demo for each case (case i uses the detuned set unless overridden).
lambda::LambdaParams demo_params(lambda::Case which, const DemoOptions& options);

lambda::Case parse_case(std::string_view name);

}  // namespace holosep::cli
