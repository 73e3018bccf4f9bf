#include "glc/engines.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "glc/mailbox.hpp"

namespace glc {
namespace {

using Clock = std::chrono::steady_clock;

// Residuals at or below this multiple of eps * ||b^R|| are rounding noise.
constexpr double kRoundoffFloor = 1024.0;
// ||r|| beyond this multiple of the reference scale counts as divergence.
constexpr double kDivergenceFactor = 1e12;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Rank-0 logic shared by every engine and backend: residual assembly,
/// convergence test, relaxation update and global solve. Backends only decide
/// when to call step() and where the patch contributions come from.
class Coordinator {
 public:
  Coordinator(const CouplingProblem& problem, const EngineOptions& options, bool aitken, std::string engine)
      : problem_(problem), options_(options), aitken_(aitken), omega_(options.omega) {
    if (!(options.omega > 0.0)) throw std::invalid_argument("engine: omega must be > 0");
    if (!(options.tol > 0.0)) throw std::invalid_argument("engine: tol must be > 0");
    if (options.max_iters < 1) throw std::invalid_argument("engine: max_iters must be >= 1");

    const int n = problem.num_subdomains();
    q_.resize(n);
    for (int k = 0; k < n; ++k) q_[k] = Vector::Zero(problem.coarse(k).interface_size());
    p_ = Vector::Zero(problem.interface_size());
    u_ = Vector::Zero(problem.interface_size());
    const double bref = problem.reference_rhs().norm();
    floor_ = kRoundoffFloor * std::numeric_limits<double>::epsilon() * bref;
    min_scale_ = std::numeric_limits<double>::epsilon() * bref;
    record_.engine = std::move(engine);
    record_.patch_iterations.assign(problem.patch_ids().size(), 0);
  }

  int iteration() const { return iteration_; }
  const Vector& u() const { return u_; }
  Vector trace(int k) const { return problem_.space().restrict_to(k, u_); }
  void set_patch_q(int k, const Vector& q) { q_[k] = q; }
  RunRecord& record() { return record_; }
  double scale() const { return scale_; }

  /// Evaluates r_j from the current contributions. Returns false when the run
  /// is over (converged, diverged, or out of iterations); otherwise updates p
  /// and u for iteration j+1.
  bool step(double time_ms, std::vector<std::int64_t> sources = {}) {
    const int j = iteration_;
    const Vector r = problem_.assemble_residual_q(q_);
    const double norm = r.norm();
    if (j >= 1 && !sources.empty()) record_.trace_sources.push_back(std::move(sources));

    bool stationary = false;
    if (aitken_ && j >= 2 && std::isfinite(norm)) {
      const Vector dr = r - r_prev_;
      const double d2 = dr.squaredNorm();
      if (d2 == 0.0) {
        stationary = true;
      } else {
        omega_ = -omega_ * r_prev_.dot(dr) / d2;
      }
    }
    record_.history.push_back({j, time_ms, norm, omega_});
    if (options_.keep_iterates) {
      record_.p_iterates.push_back(p_);
      record_.r_iterates.push_back(r);
    }
    last_norm_ = norm;

    if (!std::isfinite(norm)) return finish(RunStatus::Diverged, diverged_message(j, norm));
    if (j == 1) scale_ = std::max(norm, min_scale_) > 0.0 ? std::max(norm, min_scale_) : 1.0;
    if (j >= 1) {
      if (check_convergence(r, scale_, options_.tol, j) || norm <= floor_) return finish(RunStatus::Converged);
      if (stationary) return finish(RunStatus::Stationary, "residual stationary before reaching tolerance");
      if (norm > kDivergenceFactor * scale_) return finish(RunStatus::Diverged, diverged_message(j, norm));
    }
    if (j >= options_.max_iters) return finish(RunStatus::MaxIterations);

    p_ += omega_ * r;
    r_prev_ = r;
    GlobalSolution sol = problem_.global_solve(p_);
    u_ = std::move(sol.u);
    const auto& comp = problem_.complementary_ids();
    for (std::size_t i = 0; i < comp.size(); ++i) q_[comp[i]] = std::move(sol.complementary_reactions[i]);
    ++iteration_;
    return true;
  }

  /// Recompute every patch contribution at the current u and re-test
  /// convergence at ten times the tolerance.
  void verify_fresh() {
    for (int k : problem_.patch_ids()) q_[k] = problem_.patch_response(k, trace(k));
    const double norm = problem_.assemble_residual_q(q_).norm();
    last_norm_ = norm;
    if (!(norm <= 10.0 * options_.tol * scale_ || norm <= floor_)) {
      std::ostringstream os;
      os << "fresh residual " << norm / scale_ << " exceeds 10*tol after asynchronous stop";
      record_.status = RunStatus::Unverified;
      record_.converged = false;
      record_.diagnostic = os.str();
    }
  }

  RunRecord take(double wall_ms) {
    record_.global_iterations = iteration_;
    record_.residual_scale = scale_;
    record_.final_relative_residual = scale_ > 0.0 ? last_norm_ / scale_ : last_norm_;
    record_.wall_ms = wall_ms;
    record_.u = u_;
    record_.p = p_;
    if (options_.recover_fields) {
      for (int k : problem_.patch_ids()) {
        record_.patch_fields.push_back(problem_.fine(k).interior_recovery(problem_.fine_trace(k, u_)));
      }
    }
    return std::move(record_);
  }

 private:
  bool finish(RunStatus s, std::string diagnostic = {}) {
    record_.status = s;
    record_.converged = s == RunStatus::Converged || s == RunStatus::Stationary;
    record_.diagnostic = std::move(diagnostic);
    return false;
  }

  std::string diverged_message(int j, double norm) const {
    std::ostringstream os;
    os << "divergence at iteration " << j << ": residual norm " << norm << " with omega " << omega_;
    return os.str();
  }

  const CouplingProblem& problem_;
  EngineOptions options_;
  bool aitken_;
  double omega_;
  int iteration_ = 0;
  std::vector<Vector> q_;
  Vector p_;
  Vector u_;
  Vector r_prev_;
  double scale_ = 0.0;
  double min_scale_ = 0.0;
  double floor_ = 0.0;
  double last_norm_ = 0.0;
  RunRecord record_;
};

RunRecord run_synchronous(const CouplingProblem& problem, const EngineOptions& options, bool aitken) {
  Coordinator c(problem, options, aitken, aitken ? "aitken" : "sync");
  const auto t0 = Clock::now();
  const auto& patches = problem.patch_ids();
  auto& counts = c.record().patch_iterations;
  while (c.step(ms_since(t0))) {
    for (std::size_t i = 0; i < patches.size(); ++i) {
      c.set_patch_q(patches[i], problem.patch_response(patches[i], c.trace(patches[i])));
      ++counts[i];
    }
  }
  return c.take(ms_since(t0));
}

// ---------------------------------------------------------------------------
// Discrete-event simulator backend

class Simulator {
 public:
  Simulator(const CouplingProblem& problem, const AsyncOptions& options)
      : problem_(problem),
        options_(options),
        coord_(problem, options, false, options.wait_for_all ? "sync-sim" : "async"),
        rng_(options.schedule.seed),
        owners_(partition_patches(static_cast<int>(problem.patch_ids().size()), options.workers)) {
    const auto& patches = problem.patch_ids();
    const int n = static_cast<int>(patches.size());
    worker_of_.resize(n);
    for (int w = 0; w < static_cast<int>(owners_.size()); ++w) {
      for (int s : owners_[w]) worker_of_[s] = w;
    }
    for (int s = 0; s < n; ++s) {
      const Index size = problem.coarse(patches[s]).interface_size();
      traces_.push_back(std::make_unique<Mailbox>(size, -1));
      reactions_.push_back(std::make_unique<Mailbox>(size, worker_of_[s]));
    }
    trace_seen_.assign(n, 0);
    trace_arrived_tag_.assign(n, -1);
    reaction_seen_.assign(n, 0);
    latest_tag_.assign(n, 0);
    worker_busy_.assign(owners_.size(), false);
    worker_cursor_.assign(owners_.size(), 0);
  }

  RunRecord run() {
    const auto t0 = Clock::now();
    if (coord_.step(0.0)) {
      schedule({options_.global_cost, kWorker, EventType::PutTraces});
      while (!events_.empty() && !stopped_) {
        Event e = events_.top();
        events_.pop();
        now_ = e.time;
        dispatch(e);
      }
      if (!stopped_) throw std::logic_error("simulator: event queue drained before the coordinator stopped");
      if (coord_.record().converged && options_.verify) coord_.verify_fresh();
    }
    return coord_.take(ms_since(t0));
  }

 private:
  enum class EventType { TraceArrive, ReactionArrive, WorkerPoll, WorkerDone, PutTraces, CoordinatorWake };
  // Same-time ordering: deliveries first, then worker activity, then the coordinator.
  static constexpr int kDelivery = 0, kWorker = 1, kCoordinator = 2;

  struct Event {
    double time = 0.0;
    int order = 0;
    EventType type{};
    int slot = -1;
    int worker = -1;
    std::int64_t tag = 0;
    Vector payload;
    std::uint64_t seq = 0;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.order != b.order) return a.order > b.order;
      return a.seq > b.seq;
    }
  };

  void schedule(Event e) {
    e.seq = seq_++;
    events_.push(std::move(e));
  }

  double message_delay() {
    switch (options_.schedule.mode) {
      case DelaySchedule::Mode::Fixed: return options_.schedule.delay;
      case DelaySchedule::Mode::SeededRandom: return uniform(options_.schedule.delay);
      default: return 0.0;
    }
  }

  double solve_duration(int worker) {
    double d = options_.solve_cost * options_.schedule.solve_factor(worker);
    if (options_.schedule.mode == DelaySchedule::Mode::SeededRandom) d += uniform(options_.schedule.delay);
    return d;
  }

  double uniform(double hi) { return hi > 0.0 ? std::uniform_real_distribution<double>(0.0, hi)(rng_) : 0.0; }

  void dispatch(Event& e) {
    switch (e.type) {
      case EventType::PutTraces: put_traces(); break;
      case EventType::TraceArrive:
        if (e.tag > trace_arrived_tag_[e.slot]) {  // drop out-of-order deliveries
          trace_arrived_tag_[e.slot] = e.tag;
          traces_[e.slot]->write(e.payload, static_cast<std::uint64_t>(e.tag));
          const int w = worker_of_[e.slot];
          if (!worker_busy_[w]) schedule({now_, kWorker, EventType::WorkerPoll, -1, w});
        }
        break;
      case EventType::WorkerPoll: poll_worker(e.worker); break;
      case EventType::WorkerDone:
        schedule({now_ + message_delay(), kDelivery, EventType::ReactionArrive, e.slot, e.worker, e.tag,
                  std::move(e.payload)});
        worker_busy_[e.worker] = false;
        schedule({now_, kWorker, EventType::WorkerPoll, -1, e.worker});
        break;
      case EventType::ReactionArrive:
        reactions_[e.slot]->write(e.payload, static_cast<std::uint64_t>(e.tag));
        if (coord_idle_) {
          coord_idle_ = false;
          schedule({now_, kCoordinator, EventType::CoordinatorWake});
        }
        break;
      case EventType::CoordinatorWake: wake_coordinator(); break;
    }
  }

  void poll_worker(int w) {
    if (worker_busy_[w]) return;
    const auto& mine = owners_[w];
    for (std::size_t i = 0; i < mine.size(); ++i) {
      const std::size_t pos = (worker_cursor_[w] + i) % mine.size();
      const int s = mine[pos];
      if (!traces_[s]->has_newer(trace_seen_[s])) continue;
      const Mailbox::Message& m = traces_[s]->read();
      trace_seen_[s] = m.version;
      Vector q = problem_.patch_response(problem_.patch_ids()[s], m.payload);
      ++coord_.record().patch_iterations[s];
      worker_busy_[w] = true;
      worker_cursor_[w] = pos + 1;
      schedule({now_ + solve_duration(w), kWorker, EventType::WorkerDone, s, w, static_cast<std::int64_t>(m.tag),
                std::move(q)});
      return;
    }
  }

  void put_traces() {
    const auto& patches = problem_.patch_ids();
    const std::int64_t tag = coord_.iteration();
    for (int s = 0; s < static_cast<int>(patches.size()); ++s) {
      schedule({now_ + message_delay(), kDelivery, EventType::TraceArrive, s, -1, tag, coord_.trace(patches[s])});
    }
    coord_idle_ = false;
    schedule({now_, kCoordinator, EventType::CoordinatorWake});
  }

  void wake_coordinator() {
    const int n = static_cast<int>(reactions_.size());
    bool any_new = false;
    for (int s = 0; s < n; ++s) any_new = any_new || reactions_[s]->has_newer(reaction_seen_[s]);
    bool ready = any_new;
    if (options_.wait_for_all) {
      for (int s = 0; s < n; ++s) {
        if (reactions_[s]->has_newer(reaction_seen_[s])) {
          const auto& m = reactions_[s]->read();
          reaction_seen_[s] = m.version;
          latest_tag_[s] = static_cast<std::int64_t>(m.tag);
          pending_[s] = m.payload;
        }
      }
      ready = true;
      for (int s = 0; s < n; ++s) ready = ready && latest_tag_[s] == coord_.iteration();
    }
    if (!ready) {
      coord_idle_ = true;
      return;
    }

    const auto& patches = problem_.patch_ids();
    std::vector<std::int64_t> sources(n);
    for (int s = 0; s < n; ++s) {
      if (!options_.wait_for_all) {
        const auto& m = reactions_[s]->read();
        reaction_seen_[s] = m.version;
        latest_tag_[s] = static_cast<std::int64_t>(m.tag);
        if (m.version > 0) coord_.set_patch_q(patches[s], m.payload);
      } else {
        coord_.set_patch_q(patches[s], pending_[s]);
      }
      sources[s] = latest_tag_[s];
    }
    if (!coord_.step(now_, std::move(sources))) {
      stopped_ = true;
      return;
    }
    schedule({now_ + options_.global_cost, kWorker, EventType::PutTraces});
  }

  const CouplingProblem& problem_;
  AsyncOptions options_;
  Coordinator coord_;
  std::mt19937_64 rng_;
  std::vector<std::vector<int>> owners_;
  std::vector<int> worker_of_;
  std::vector<std::unique_ptr<Mailbox>> traces_;
  std::vector<std::unique_ptr<Mailbox>> reactions_;
  std::vector<std::uint64_t> trace_seen_;
  std::vector<std::int64_t> trace_arrived_tag_;
  std::vector<std::uint64_t> reaction_seen_;
  std::vector<std::int64_t> latest_tag_;
  std::unordered_map<int, Vector> pending_;
  std::vector<bool> worker_busy_;
  std::vector<std::size_t> worker_cursor_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  bool coord_idle_ = false;
  bool stopped_ = false;
};

// ---------------------------------------------------------------------------
// Threaded backend

class ThreadedRun {
 public:
  ThreadedRun(const CouplingProblem& problem, const AsyncOptions& options)
      : problem_(problem),
        options_(options),
        coord_(problem, options, false, options.wait_for_all ? "sync-threaded" : "async"),
        owners_(partition_patches(static_cast<int>(problem.patch_ids().size()), options.workers)),
        bells_(owners_.size()) {
    const auto& patches = problem.patch_ids();
    worker_of_.resize(patches.size());
    for (int w = 0; w < static_cast<int>(owners_.size()); ++w) {
      for (int s : owners_[w]) worker_of_[s] = w;
    }
    for (std::size_t s = 0; s < patches.size(); ++s) {
      const Index size = problem.coarse(patches[s]).interface_size();
      traces_.push_back(std::make_unique<Mailbox>(size, -1));
      reactions_.push_back(std::make_unique<Mailbox>(size, worker_of_[s]));
    }
    fine_counts_.assign(patches.size(), 0);
  }

  RunRecord run() {
    const auto t0 = Clock::now();
    const int n = static_cast<int>(traces_.size());
    if (!coord_.step(0.0)) return coord_.take(ms_since(t0));
    put_traces();

    std::vector<std::thread> threads;
    threads.reserve(owners_.size());
    for (int w = 0; w < static_cast<int>(owners_.size()); ++w) threads.emplace_back([this, w] { worker_main(w); });

    const auto& patches = problem_.patch_ids();
    std::vector<std::uint64_t> seen(n, 0);
    std::vector<std::int64_t> tags(n, 0);
    std::vector<Vector> latest(n);
    for (int s = 0; s < n; ++s) latest[s] = Vector::Zero(traces_[s]->read().payload.size());

    for (;;) {
      const std::uint64_t bell = coord_bell_.value();
      if (failed_.load()) break;
      bool any_new = false;
      for (int s = 0; s < n; ++s) {
        if (reactions_[s]->has_newer(seen[s])) {
          const auto& m = reactions_[s]->read();
          seen[s] = m.version;
          tags[s] = static_cast<std::int64_t>(m.tag);
          latest[s] = m.payload;
          any_new = true;
        }
      }
      bool ready = any_new;
      if (options_.wait_for_all) {
        ready = true;
        for (int s = 0; s < n; ++s) ready = ready && tags[s] == coord_.iteration();
      }
      if (!ready) {
        coord_bell_.wait(bell);
        continue;
      }
      for (int s = 0; s < n; ++s) {
        if (seen[s] > 0) coord_.set_patch_q(patches[s], latest[s]);
      }
      if (!coord_.step(ms_since(t0), tags)) break;
      put_traces();
    }
    const double wall = ms_since(t0);

    stop_.raise();
    for (auto& b : bells_) b.ring();
    for (auto& t : threads) t.join();

    for (int s = 0; s < n; ++s) coord_.record().patch_iterations[s] = fine_counts_[s];
    if (failed_.load()) {
      RunRecord& rec = coord_.record();
      rec.status = RunStatus::WorkerFailed;
      rec.converged = false;
      std::lock_guard lock(failure_mutex_);
      rec.diagnostic = failure_;
    } else if (coord_.record().converged && options_.verify && !options_.wait_for_all) {
      coord_.verify_fresh();
    }
    return coord_.take(wall);
  }

 private:
  void put_traces() {
    const auto& patches = problem_.patch_ids();
    const auto tag = static_cast<std::uint64_t>(coord_.iteration());
    for (std::size_t s = 0; s < patches.size(); ++s) traces_[s]->write(coord_.trace(patches[s]), tag);
    for (auto& b : bells_) b.ring();
  }

  void worker_main(int w) {
    try {
      const auto& mine = owners_[w];
      std::vector<std::uint64_t> seen(traces_.size(), 0);
      std::mt19937_64 rng(options_.schedule.seed + static_cast<std::uint64_t>(w));
      const double factor = options_.schedule.solve_factor(w);
      while (!stop_.raised()) {
        const std::uint64_t bell = bells_[w].value();
        bool worked = false;
        for (int s : mine) {
          if (stop_.raised()) break;
          if (!traces_[s]->has_newer(seen[s])) continue;
          const Mailbox::Message& m = traces_[s]->read();
          seen[s] = m.version;
          const auto start = Clock::now();
          Vector q = problem_.patch_response(problem_.patch_ids()[s], m.payload);
          const auto elapsed = Clock::now() - start;
          auto until = start + std::chrono::duration_cast<Clock::duration>(elapsed * factor);
          until += extra_delay(rng);
          std::this_thread::sleep_until(until);
          reactions_[s]->write(q, m.tag);
          ++fine_counts_[s];
          coord_bell_.ring();
          worked = true;
        }
        if (!worked) bells_[w].wait(bell);
      }
    } catch (const std::exception& ex) {
      {
        std::lock_guard lock(failure_mutex_);
        failure_ = "worker " + std::to_string(w) + " failed: " + ex.what();
      }
      failed_.store(true);
      coord_bell_.ring();
    }
  }

  Clock::duration extra_delay(std::mt19937_64& rng) const {
    double ms = 0.0;
    if (options_.schedule.mode == DelaySchedule::Mode::Fixed) ms = options_.schedule.delay;
    if (options_.schedule.mode == DelaySchedule::Mode::SeededRandom && options_.schedule.delay > 0.0) {
      ms = std::uniform_real_distribution<double>(0.0, options_.schedule.delay)(rng);
    }
    return std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double, std::milli>(ms));
  }

  const CouplingProblem& problem_;
  AsyncOptions options_;
  Coordinator coord_;
  std::vector<std::vector<int>> owners_;
  std::vector<int> worker_of_;
  std::vector<std::unique_ptr<Mailbox>> traces_;
  std::vector<std::unique_ptr<Mailbox>> reactions_;
  std::deque<Doorbell> bells_;
  Doorbell coord_bell_;
  StopFlag stop_;
  std::vector<int> fine_counts_;  // each entry written by its owning worker only
  std::atomic<bool> failed_{false};
  std::mutex failure_mutex_;
  std::string failure_;
};

}  // namespace

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::Stationary: return "stationary";
    case RunStatus::MaxIterations: return "max_iterations";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::Unverified: return "unverified";
    case RunStatus::WorkerFailed: return "worker_failed";
  }
  return "unknown";
}

bool check_convergence(const Vector& r, double scale, double tol) {
  if (!(scale > 0.0)) throw std::invalid_argument("check_convergence: scale must be > 0");
  return r.norm() / scale <= tol;
}

bool check_convergence(const Vector& r, double scale, double tol, int iteration) {
  return iteration > 0 && check_convergence(r, scale, tol);
}

RunRecord run_sync(const CouplingProblem& problem, const EngineOptions& options) {
  return run_synchronous(problem, options, false);
}

RunRecord run_aitken(const CouplingProblem& problem, const EngineOptions& options) {
  return run_synchronous(problem, options, true);
}

double DelaySchedule::solve_factor(int worker) const {
  return mode == Mode::WorkerSlowdown && worker == slow_worker ? slowdown : 1.0;
}

std::string to_string(DelaySchedule::Mode m) {
  switch (m) {
    case DelaySchedule::Mode::None: return "none";
    case DelaySchedule::Mode::Fixed: return "fixed";
    case DelaySchedule::Mode::SeededRandom: return "random";
    case DelaySchedule::Mode::WorkerSlowdown: return "slowdown";
  }
  return "none";
}

DelaySchedule::Mode delay_mode_from_string(const std::string& s) {
  if (s == "none") return DelaySchedule::Mode::None;
  if (s == "fixed") return DelaySchedule::Mode::Fixed;
  if (s == "random" || s == "seeded-random") return DelaySchedule::Mode::SeededRandom;
  if (s == "slowdown" || s == "per-worker-slowdown") return DelaySchedule::Mode::WorkerSlowdown;
  throw std::invalid_argument("unknown delay mode '" + s + "' (none, fixed, random, slowdown)");
}

std::string to_string(Backend b) { return b == Backend::Simulated ? "simulated" : "threaded"; }

Backend backend_from_string(const std::string& s) {
  if (s == "simulated" || s == "sim") return Backend::Simulated;
  if (s == "threaded" || s == "threads") return Backend::Threaded;
  throw std::invalid_argument("unknown backend '" + s + "' (simulated, threaded)");
}

std::vector<std::vector<int>> partition_patches(int num_patches, int workers) {
  if (workers < 1) throw std::invalid_argument("partition_patches: workers must be >= 1");
  if (num_patches < 1) throw std::invalid_argument("partition_patches: no patches to distribute");
  const int w = std::min(workers, num_patches);
  std::vector<std::vector<int>> out(w);
  for (int i = 0; i < w; ++i) {
    const int lo = static_cast<int>(static_cast<long>(i) * num_patches / w);
    const int hi = static_cast<int>(static_cast<long>(i + 1) * num_patches / w);
    for (int s = lo; s < hi; ++s) out[i].push_back(s);
  }
  return out;
}

RunRecord run_async(const CouplingProblem& problem, const AsyncOptions& options) {
  if (options.workers < 1) throw std::invalid_argument("run_async: workers must be >= 1");
  if (options.schedule.mode == DelaySchedule::Mode::WorkerSlowdown && !(options.schedule.slowdown >= 1.0)) {
    throw std::invalid_argument("run_async: slowdown factor must be >= 1");
  }
  if (options.backend == Backend::Simulated) return Simulator(problem, options).run();
  return ThreadedRun(problem, options).run();
}

}  // namespace glc
