#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glc/coupling.hpp"

namespace glc {

enum class RunStatus {
  Converged,
  Stationary,     // Aitken: residual stopped changing before reaching tol
  MaxIterations,
  Diverged,       // non-finite or exploding residual
  Unverified,     // async: stale-data convergence not confirmed by a fresh residual
  WorkerFailed,
};

std::string to_string(RunStatus s);

struct IterationLog {
  int iteration = 0;
  double time_ms = 0.0;
  double residual_norm = 0.0;
  double omega = 0.0;
};

struct RunRecord {
  std::string engine;
  RunStatus status = RunStatus::MaxIterations;
  bool converged = false;
  std::string diagnostic;

  /// Residual evaluations are numbered 0..global_iterations; entry 0 is the
  /// initialization (all reactions zero) and never triggers convergence.
  std::vector<IterationLog> history;
  int global_iterations = 0;
  /// Fine solves per patch, in CouplingProblem::patch_ids() order.
  std::vector<int> patch_iterations;
  /// trace_sources[j-1][i]: iteration whose trace produced the reaction of
  /// patch i used at iteration j (sigma(j) <= j; equal to j when synchronous).
  std::vector<std::vector<std::int64_t>> trace_sources;

  double residual_scale = 0.0;
  double final_relative_residual = 0.0;
  double wall_ms = 0.0;

  Vector u;  // final global interface displacement
  Vector p;  // final intereffort
  std::vector<Vector> patch_fields;  // when EngineOptions::recover_fields

  /// Per-iteration p_j and r_j, when EngineOptions::keep_iterates.
  std::vector<Vector> p_iterates;
  std::vector<Vector> r_iterates;
};

struct EngineOptions {
  double omega = 1.0;  // fixed relaxation, or the first step for Aitken
  double tol = 1e-8;
  int max_iters = 10000;
  bool keep_iterates = false;
  bool recover_fields = false;
};

/// True iff ||r||_2 / scale <= tol.
bool check_convergence(const Vector& r, double scale, double tol);

/// Engine form: the initialization evaluation (iteration 0) never counts.
bool check_convergence(const Vector& r, double scale, double tol, int iteration);

/// Synchronous Richardson iteration with fixed relaxation: p += omega * r.
RunRecord run_sync(const CouplingProblem& problem, const EngineOptions& options);

/// Synchronous iteration with Aitken dynamic relaxation:
/// omega_{j+1} = -omega_j <r_{j-1}, r_j - r_{j-1}> / ||r_j - r_{j-1}||^2.
RunRecord run_aitken(const CouplingProblem& problem, const EngineOptions& options);

/// Delay injection for the asynchronous engine. Durations are virtual time
/// units in the simulator and milliseconds in the threaded backend.
struct DelaySchedule {
  enum class Mode { None, Fixed, SeededRandom, WorkerSlowdown };

  Mode mode = Mode::None;
  std::uint64_t seed = 0;
  /// Fixed: added to every message. SeededRandom: upper bound of a uniform
  /// extra delay drawn per solve and per message.
  double delay = 0.0;
  /// WorkerSlowdown: solves on `slow_worker` take `slowdown` times longer.
  int slow_worker = 0;
  double slowdown = 1.0;

  double solve_factor(int worker) const;
};

std::string to_string(DelaySchedule::Mode m);
DelaySchedule::Mode delay_mode_from_string(const std::string& s);

enum class Backend { Simulated, Threaded };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

struct AsyncOptions : EngineOptions {
  int workers = 1;
  Backend backend = Backend::Simulated;
  DelaySchedule schedule;
  /// Coordinator waits for every patch before updating: the synchronous
  /// algorithm on the same machinery, used for like-for-like timing.
  bool wait_for_all = false;
  /// Simulator costs in virtual time units. The global default is roughly the
  /// measured ratio of one global interface solve to one patch solve.
  double solve_cost = 1.0;
  double global_cost = 0.7;
  /// Re-check convergence with fresh reactions after an asynchronous stop.
  bool verify = true;
};

/// Contiguous blocks of patch slots per worker (slot = position in patch_ids()).
std::vector<std::vector<int>> partition_patches(int num_patches, int workers);

/// Coordinator/worker iteration over latest-value mailboxes.
RunRecord run_async(const CouplingProblem& problem, const AsyncOptions& options);

}  // namespace glc
