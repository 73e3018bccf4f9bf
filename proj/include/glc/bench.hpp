#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glc/coupling.hpp"
#include "glc/engines.hpp"

namespace glc {

enum class Mode { Sync, Aitken, Async, SyncParallel };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct ScenarioConfig {
  std::string name = "beam";
  BeamSpec beam;
  std::vector<Mode> modes;
  std::vector<double> omegas{1.0};
  std::optional<double> omega0;  // Aitken first step; defaults to omegas.front()
  double tol = 1e-8;
  int max_iters = 10000;
  Index oracle_cap = 60000;

  /// Worker counts for the parallel modes; empty means one worker per patch.
  std::vector<int> workers;
  Backend backend = Backend::Simulated;
  DelaySchedule schedule;  // seed lives here
  double solve_cost = 1.0;
  double global_cost = 0.7;
  bool verify = true;

  std::string out_dir = "results";
  bool dump_mesh = false;
};

/// Parses the sectioned key=value format (see configs/beam_2x2x4.cfg).
/// Unknown sections or keys are rejected; every error is a ConfigError naming the key.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Range checks shared by parse_config and command-line overrides.
void validate(const ScenarioConfig& config);

struct ResultRow {
  std::string scenario;
  Mode mode = Mode::Sync;
  double omega = 0.0;
  int workers = 0;  // 0 for the sequential engines
  int it_global = 0;
  int it_fine_min = 0;
  int it_fine_max = 0;
  double wall_ms = 0.0;
  double rel_residual = 0.0;
  std::optional<double> rel_error;
  bool converged = false;
  RunRecord record;
};

struct ScenarioOutcome {
  std::vector<ResultRow> rows;
  std::uint64_t problem_fingerprint = 0;
  Index interface_size = 0;
  bool reference_computed = false;
};

/// Builds the problem once, runs every requested engine/omega/worker
/// combination against it, and writes the report when `config.out_dir` is set.
ScenarioOutcome run_scenario(const ScenarioConfig& config);

/// Writes results.csv, one history_<n>.csv per row, and summary.json into `dir`.
void emit_report(const ScenarioOutcome& outcome, const std::filesystem::path& dir);

/// Per-run CSV with header `iter,time_ms,residual_norm,omega`.
std::string history_csv(const RunRecord& record);
std::string results_csv(const std::vector<ResultRow>& rows);

inline constexpr const char* kResultsHeader =
    "scenario,mode,omega,it_global,it_fine_min,it_fine_max,wall_ms,rel_residual,rel_error,converged";
inline constexpr const char* kHistoryHeader = "iter,time_ms,residual_norm,omega";

}  // namespace glc
