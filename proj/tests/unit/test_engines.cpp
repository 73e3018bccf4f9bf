#include <random>
#include <set>

#include "doctest.h"
#include "glc/engines.hpp"
#include "oracles.hpp"

using namespace glc;

namespace {

// One patch, one interface DOF: S^G = 2, b^G = 0, S^R = 1, b^R = 1.
CouplingProblem scalar_toy() {
  DenseMatrix kg(1, 1), kf(1, 1);
  kg << 2.0;
  kf << 1.0;
  std::vector<SchurHandle> coarse{condense(oracle::to_sparse(kg), Vector::Zero(1), {0})};
  std::vector<std::optional<SchurHandle>> fine{condense(oracle::to_sparse(kf), Vector::Ones(1), {0})};
  InterfaceSpace space;
  space.size = 1;
  space.assembly = {{0}};
  SparseMatrix j(1, 1);
  j.insert(0, 0) = 1.0;
  space.interpolators = {j};
  space.is_patch = {true};
  return CouplingProblem(std::move(coarse), std::move(fine), std::move(space));
}

BeamSpec small_beam() {
  BeamSpec s;
  s.grid = {2, 1, 2};
  s.coarse_elems = 2;
  s.fine_elems = 4;
  s.inclusion_radius = 0.8;
  return s;
}

double rel_error(const Vector& u, const Vector& ref) { return (u - ref).norm() / ref.norm(); }

}  // namespace

TEST_CASE("check_convergence boundaries") {
  Vector r = Vector::Zero(4);
  CHECK(check_convergence(r, 3.0, 1e-8));
  CHECK_FALSE(check_convergence(r, 3.0, 1e-8, 0));
  CHECK(check_convergence(r, 3.0, 1e-8, 1));

  const double scale = 2.5, tol = 1e-6;
  r = Vector::Zero(4);
  r[0] = scale * tol * 0.999;
  CHECK(check_convergence(r, scale, tol));
  r[0] = scale * tol * 1.001;
  CHECK_FALSE(check_convergence(r, scale, tol));
  CHECK_THROWS_AS(check_convergence(r, 0.0, tol), std::invalid_argument);
}

TEST_CASE("scalar toy: fixed relaxation contracts by one half") {
  const CouplingProblem pb = scalar_toy();
  EngineOptions opt;
  opt.omega = 1.0;
  opt.tol = 1e-10;
  opt.keep_iterates = true;
  const RunRecord rec = run_sync(pb, opt);
  CHECK(rec.converged);
  CHECK(rec.history.size() == static_cast<std::size_t>(rec.global_iterations) + 1);
  CHECK(rec.history[0].residual_norm == 0.0);
  CHECK(rec.history[1].residual_norm == doctest::Approx(1.0));
  for (std::size_t j = 2; j < rec.history.size(); ++j) {
    CHECK(rec.history[j].residual_norm == doctest::Approx(0.5 * rec.history[j - 1].residual_norm));
  }
  // p* = S^G u_R - b^G = 2 and u_R = b^R / S^R = 1.
  CHECK(rec.p[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rec.u[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scalar toy: Aitken is exact after two updates") {
  const CouplingProblem pb = scalar_toy();
  for (double w0 : {0.3, 1.0, 1.7}) {
    EngineOptions opt;
    opt.omega = w0;
    const RunRecord rec = run_aitken(pb, opt);
    CHECK(rec.converged);
    CHECK(rec.global_iterations - 1 <= 2);
    CHECK(rec.u[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.history.back().omega == doctest::Approx(2.0));
  }
}

TEST_CASE("synchronous residual follows the dense iteration matrix") {
  BeamSpec spec = small_beam();
  spec.complementary = {2};
  const CouplingProblem pb = build_beam_problem(spec);
  REQUIRE(pb.interface_size() <= 200);
  const auto d = oracle::dense_operators(pb);
  const DenseMatrix m = d.sr * d.sg.inverse();
  const double omega = 0.8;
  EngineOptions opt;
  opt.omega = omega;
  opt.max_iters = 15;
  opt.tol = 1e-14;
  opt.keep_iterates = true;
  const RunRecord rec = run_sync(pb, opt);
  REQUIRE(rec.r_iterates.size() >= 10);
  const DenseMatrix step = DenseMatrix::Identity(m.rows(), m.cols()) - omega * m;
  for (std::size_t j = 1; j + 1 < rec.r_iterates.size(); ++j) {
    const Vector expected = step * rec.r_iterates[j];
    CHECK((rec.r_iterates[j + 1] - expected).norm() <= 1e-10 * rec.r_iterates[1].norm());
  }
  // First evaluated residual is the residual at p = 0.
  const Vector r1 = d.br - d.sr * d.sg.ldlt().solve(d.bg);
  CHECK((rec.r_iterates[1] - r1).norm() <= 1e-10 * r1.norm());
}

TEST_CASE("engines agree with the reference oracle") {
  const CouplingProblem pb = build_beam_problem(small_beam());
  const Vector ref = pb.reference_solve().u;
  EngineOptions opt;
  opt.omega = 0.5;
  opt.tol = 1e-8;

  const RunRecord sync = run_sync(pb, opt);
  CHECK(sync.status == RunStatus::Converged);
  CHECK(rel_error(sync.u, ref) <= 10 * opt.tol);
  CHECK(sync.final_relative_residual <= opt.tol);
  for (int c : sync.patch_iterations) CHECK(c == sync.global_iterations);

  const RunRecord aitken = run_aitken(pb, opt);
  CHECK(aitken.converged);
  CHECK(rel_error(aitken.u, ref) <= 10 * opt.tol);
  CHECK(aitken.global_iterations < sync.global_iterations);

  // Stale reactions shrink the stable relaxation range.
  AsyncOptions a;
  a.omega = 0.2;
  a.tol = 1e-8;
  a.workers = 2;
  a.schedule.mode = DelaySchedule::Mode::SeededRandom;
  a.schedule.seed = 42;
  a.schedule.delay = 0.5;
  const RunRecord async = run_async(pb, a);
  CHECK(async.status == RunStatus::Converged);
  CHECK(rel_error(async.u, ref) <= 10 * a.tol);
  for (std::size_t j = 0; j < async.trace_sources.size(); ++j) {
    for (auto s : async.trace_sources[j]) CHECK(s <= static_cast<std::int64_t>(j + 1));
  }

  a.backend = Backend::Threaded;
  a.schedule.delay = 0.2;
  const RunRecord threaded = run_async(pb, a);
  CHECK(threaded.status == RunStatus::Converged);
  CHECK(rel_error(threaded.u, ref) <= 10 * a.tol);
}

TEST_CASE("identical coarse and fine models converge immediately") {
  BeamSpec spec = small_beam();
  spec.fine_equals_coarse = true;
  const CouplingProblem pb = build_beam_problem(spec);
  EngineOptions opt;
  const RunRecord sync = run_sync(pb, opt);
  CHECK(sync.converged);
  CHECK(sync.global_iterations == 1);
  const RunRecord aitken = run_aitken(pb, opt);
  CHECK(aitken.converged);
  CHECK(aitken.global_iterations == 1);
}

TEST_CASE("simulator lockstep with the synchronous engine") {
  const CouplingProblem pb = build_beam_problem(small_beam());
  EngineOptions opt;
  opt.omega = 0.5;
  opt.max_iters = 25;
  opt.tol = 1e-14;
  opt.keep_iterates = true;
  const RunRecord sync = run_sync(pb, opt);

  AsyncOptions a;
  static_cast<EngineOptions&>(a) = opt;
  a.workers = static_cast<int>(pb.patch_ids().size());
  a.verify = false;
  const RunRecord async = run_async(pb, a);
  REQUIRE(sync.p_iterates.size() == async.p_iterates.size());
  REQUIRE(sync.p_iterates.size() >= 21);
  for (std::size_t j = 0; j < sync.p_iterates.size(); ++j) {
    CHECK((sync.p_iterates[j] - async.p_iterates[j]).norm() <= 1e-12 * (sync.p_iterates[j].norm() + 1.0));
    CHECK((sync.r_iterates[j] - async.r_iterates[j]).norm() <= 1e-12 * (sync.r_iterates[1].norm()));
  }
  for (std::size_t j = 0; j < async.trace_sources.size(); ++j) {
    for (auto s : async.trace_sources[j]) CHECK(s == static_cast<std::int64_t>(j + 1));
  }
}

TEST_CASE("wait-for-all runs reproduce the synchronous engine") {
  const CouplingProblem pb = build_beam_problem(small_beam());
  EngineOptions opt;
  opt.omega = 0.5;
  const RunRecord sync = run_sync(pb, opt);
  for (Backend b : {Backend::Simulated, Backend::Threaded}) {
    AsyncOptions a;
    static_cast<EngineOptions&>(a) = opt;
    a.workers = 3;
    a.backend = b;
    a.wait_for_all = true;
    a.schedule.mode = DelaySchedule::Mode::SeededRandom;
    a.schedule.seed = 3;
    a.schedule.delay = 0.3;
    const RunRecord r = run_async(pb, a);
    CHECK(r.converged);
    CHECK(r.global_iterations == sync.global_iterations);
    CHECK((r.u - sync.u).norm() <= 1e-12 * sync.u.norm());
  }
}

TEST_CASE("simulated runs are deterministic") {
  const CouplingProblem pb = build_beam_problem(small_beam());
  AsyncOptions a;
  a.omega = 0.2;
  a.workers = 3;
  a.schedule.mode = DelaySchedule::Mode::SeededRandom;
  a.schedule.seed = 99;
  a.schedule.delay = 1.0;
  const RunRecord x = run_async(pb, a);
  const RunRecord y = run_async(pb, a);
  CHECK(x.global_iterations == y.global_iterations);
  CHECK(x.patch_iterations == y.patch_iterations);
  CHECK(x.trace_sources == y.trace_sources);
  REQUIRE(x.history.size() == y.history.size());
  for (std::size_t j = 0; j < x.history.size(); ++j) {
    CHECK(x.history[j].residual_norm == y.history[j].residual_norm);
    CHECK(x.history[j].time_ms == y.history[j].time_ms);
  }
  CHECK(x.u == y.u);

  a.schedule.seed = 100;
  const RunRecord z = run_async(pb, a);
  CHECK(z.trace_sources != x.trace_sources);
}

TEST_CASE("asynchronous runs show stale reactions and uneven patch counts") {
  const CouplingProblem pb = build_beam_problem(small_beam());
  AsyncOptions a;
  a.omega = 0.2;
  a.workers = 2;
  a.schedule.mode = DelaySchedule::Mode::WorkerSlowdown;
  a.schedule.slow_worker = 0;
  a.schedule.slowdown = 4.0;
  const RunRecord r = run_async(pb, a);
  CHECK(r.converged);
  const auto [lo, hi] = std::minmax_element(r.patch_iterations.begin(), r.patch_iterations.end());
  CHECK(*lo < *hi);
  bool stale = false;
  for (std::size_t j = 0; j < r.trace_sources.size(); ++j) {
    for (auto s : r.trace_sources[j]) stale = stale || s < static_cast<std::int64_t>(j + 1);
  }
  CHECK(stale);
}

TEST_CASE("failure statuses") {
  const CouplingProblem pb = build_beam_problem(small_beam());
  SUBCASE("divergence reports omega and iteration") {
    EngineOptions opt;
    opt.omega = 50.0;
    const RunRecord r = run_sync(pb, opt);
    CHECK(r.status == RunStatus::Diverged);
    CHECK_FALSE(r.converged);
    CHECK(r.diagnostic.find("omega") != std::string::npos);
    CHECK(r.diagnostic.find("iteration") != std::string::npos);
  }
  SUBCASE("iteration budget") {
    EngineOptions opt;
    opt.omega = 0.1;
    opt.max_iters = 5;
    const RunRecord r = run_sync(pb, opt);
    CHECK(r.status == RunStatus::MaxIterations);
    CHECK(r.global_iterations == 5);
    CHECK(r.history.size() == 6);
  }
  SUBCASE("invalid options") {
    EngineOptions opt;
    opt.omega = 0.0;
    CHECK_THROWS_AS(run_sync(pb, opt), std::invalid_argument);
    opt.omega = 1.0;
    opt.tol = -1.0;
    CHECK_THROWS_AS(run_aitken(pb, opt), std::invalid_argument);
    AsyncOptions a;
    a.workers = 0;
    CHECK_THROWS_AS(run_async(pb, a), std::invalid_argument);
  }
}

TEST_CASE("patch partition") {
  const auto p = partition_patches(8, 3);
  REQUIRE(p.size() == 3);
  std::vector<int> flat;
  for (const auto& block : p) {
    CHECK_FALSE(block.empty());
    for (std::size_t i = 1; i < block.size(); ++i) CHECK(block[i] == block[i - 1] + 1);
    flat.insert(flat.end(), block.begin(), block.end());
  }
  CHECK(flat == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(partition_patches(2, 5).size() == 2);
  CHECK_THROWS(partition_patches(4, 0));
}

TEST_CASE("delay schedule names") {
  for (auto m : {DelaySchedule::Mode::None, DelaySchedule::Mode::Fixed, DelaySchedule::Mode::SeededRandom,
                 DelaySchedule::Mode::WorkerSlowdown}) {
    CHECK(delay_mode_from_string(to_string(m)) == m);
  }
  CHECK_THROWS(delay_mode_from_string("sometimes"));
  DelaySchedule s;
  s.mode = DelaySchedule::Mode::WorkerSlowdown;
  s.slow_worker = 1;
  s.slowdown = 10.0;
  CHECK(s.solve_factor(1) == 10.0);
  CHECK(s.solve_factor(0) == 1.0);
}
