#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "glc/bench.hpp"
#include "glc/condensation.hpp"
#include "glc/coupling.hpp"
#include "glc/engines.hpp"
#include "glc/error.hpp"
#include "glc/fem.hpp"
#include "glc/mesh.hpp"

namespace py = pybind11;
using namespace glc;

namespace {

std::array<Point3, 8> to_hex(const Eigen::Matrix<double, 8, 3>& x) {
  std::array<Point3, 8> out;
  for (int n = 0; n < 8; ++n) out[n] = {x(n, 0), x(n, 1), x(n, 2)};
  return out;
}

Eigen::MatrixXd node_array(const StructuredMesh& m) {
  Eigen::MatrixXd out(m.num_nodes(), 3);
  for (Index n = 0; n < m.num_nodes(); ++n) {
    for (int d = 0; d < 3; ++d) out(n, d) = m.node_coords[n][d];
  }
  return out;
}

Eigen::Matrix<Index, Eigen::Dynamic, 8, Eigen::RowMajor> hex_array(const StructuredMesh& m) {
  Eigen::Matrix<Index, Eigen::Dynamic, 8, Eigen::RowMajor> out(m.num_elements(), 8);
  for (Index e = 0; e < m.num_elements(); ++e) {
    for (int a = 0; a < 8; ++a) out(e, a) = m.hex_connectivity[e][a];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_glcoupling, m) {
  m.doc() = "Global/local coupling with synchronous, Aitken and asynchronous iterations";

  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<Face>(m, "Face")
      .value("XMinus", Face::XMinus)
      .value("XPlus", Face::XPlus)
      .value("YMinus", Face::YMinus)
      .value("YPlus", Face::YPlus)
      .value("ZMinus", Face::ZMinus)
      .value("ZPlus", Face::ZPlus);
  m.def("face_from_string", &face_from_string, py::arg("name"));

  py::class_<StructuredMesh>(m, "StructuredMesh")
      .def_readonly("elems_per_edge", &StructuredMesh::elems_per_edge)
      .def_readonly("edge_length", &StructuredMesh::edge_length)
      .def_readonly("origin", &StructuredMesh::origin)
      .def_property_readonly("num_nodes", &StructuredMesh::num_nodes)
      .def_property_readonly("num_elements", &StructuredMesh::num_elements)
      .def_property_readonly("num_dofs", &StructuredMesh::num_dofs)
      .def_property_readonly("nodes", &node_array)
      .def_property_readonly("hexes", &hex_array);
  m.def("build_cube_mesh", &build_cube_mesh, py::arg("elems_per_edge"), py::arg("origin"), py::arg("edge_length"));
  m.def(
      "interface_dofs",
      [](const StructuredMesh& mesh, const std::vector<Face>& faces) { return extract_interface(mesh, faces).dofs; },
      py::arg("mesh"), py::arg("faces"));

  m.def(
      "element_stiffness",
      [](const Eigen::Matrix<double, 8, 3>& coords, double young, double poisson) {
        return Eigen::MatrixXd(element_stiffness(to_hex(coords), young, poisson));
      },
      py::arg("coords"), py::arg("young"), py::arg("poisson"));
  m.def(
      "assemble_cube",
      [](const StructuredMesh& mesh, double e_matrix, double e_ratio, double nu, double radius, const Point3& load) {
        const SubdomainModel model = assemble(mesh, assign_inclusion(mesh, e_matrix, e_ratio, nu, radius), load);
        return py::make_tuple(model.stiffness, model.load);
      },
      py::arg("mesh"), py::arg("e_matrix") = 1.0, py::arg("e_ratio") = 10.0, py::arg("nu") = 0.3,
      py::arg("inclusion_radius") = 0.0, py::arg("body_load") = Point3{1.0, 1.0, 1.0},
      "Stiffness (scipy.sparse) and load of one cube with a spherical inclusion.");

  py::class_<SchurHandle>(m, "SchurHandle")
      .def_property_readonly("interface_size", &SchurHandle::interface_size)
      .def_property_readonly("interior_size", &SchurHandle::interior_size)
      .def_property_readonly("condensed_rhs", &SchurHandle::condensed_rhs)
      .def("reaction", &SchurHandle::reaction, py::arg("u_b"))
      .def("interior_recovery", &SchurHandle::interior_recovery, py::arg("u_b"))
      .def("dense_schur", &SchurHandle::dense_schur);
  m.def(
      "condense",
      [](SparseMatrix k, Vector f, std::vector<Index> interface, std::vector<Index> dirichlet) {
        return condense(std::move(k), std::move(f), std::move(interface), std::move(dirichlet));
      },
      py::arg("stiffness"), py::arg("load"), py::arg("interface_dofs"), py::arg("dirichlet_dofs") = std::vector<Index>{});

  py::enum_<InterfaceFaces>(m, "InterfaceFaces")
      .value("Shared", InterfaceFaces::Shared)
      .value("All", InterfaceFaces::All);

  py::class_<BeamSpec>(m, "BeamSpec")
      .def(py::init<>())
      .def_readwrite("grid", &BeamSpec::grid)
      .def_readwrite("coarse_elems", &BeamSpec::coarse_elems)
      .def_readwrite("fine_elems", &BeamSpec::fine_elems)
      .def_readwrite("edge_length", &BeamSpec::edge_length)
      .def_readwrite("e_matrix", &BeamSpec::e_matrix)
      .def_readwrite("e_ratio", &BeamSpec::e_ratio)
      .def_readwrite("nu", &BeamSpec::nu)
      .def_readwrite("inclusion_radius", &BeamSpec::inclusion_radius)
      .def_readwrite("body_load", &BeamSpec::body_load)
      .def_readwrite("clamp", &BeamSpec::clamp)
      .def_readwrite("interface_faces", &BeamSpec::interface_faces)
      .def_readwrite("complementary", &BeamSpec::complementary)
      .def_readwrite("fine_equals_coarse", &BeamSpec::fine_equals_coarse)
      .def_property_readonly("num_cubes", &BeamSpec::num_cubes)
      .def_property_readonly("reference_dofs", &BeamSpec::reference_dofs);

  py::class_<ReferenceSolution>(m, "ReferenceSolution")
      .def_readonly("u", &ReferenceSolution::u)
      .def_readonly("patch_fields", &ReferenceSolution::patch_fields);

  py::class_<CouplingProblem>(m, "CouplingProblem")
      .def_property_readonly("interface_size", &CouplingProblem::interface_size)
      .def_property_readonly("num_subdomains", &CouplingProblem::num_subdomains)
      .def_property_readonly("patch_ids", &CouplingProblem::patch_ids)
      .def_property_readonly("complementary_ids", &CouplingProblem::complementary_ids)
      .def_property_readonly("global_rhs", &CouplingProblem::global_rhs)
      .def_property_readonly("reference_rhs", &CouplingProblem::reference_rhs)
      .def("global_solve", [](const CouplingProblem& p, const Vector& q) { return p.global_solve(q).u; }, py::arg("p"),
           "Global interface displacement for a given intereffort.")
      .def("fine_local_solve", &CouplingProblem::fine_local_solve, py::arg("k"), py::arg("u"))
      .def("reference_solve", &CouplingProblem::reference_solve, py::call_guard<py::gil_scoped_release>())
      .def("dense_global_operator", &CouplingProblem::dense_global_operator)
      .def("dense_reference_operator", &CouplingProblem::dense_reference_operator)
      .def("fingerprint", &CouplingProblem::fingerprint);
  m.def("build_beam_problem", &build_beam_problem, py::arg("spec"), py::call_guard<py::gil_scoped_release>());

  py::enum_<RunStatus>(m, "RunStatus")
      .value("Converged", RunStatus::Converged)
      .value("Stationary", RunStatus::Stationary)
      .value("MaxIterations", RunStatus::MaxIterations)
      .value("Diverged", RunStatus::Diverged)
      .value("Unverified", RunStatus::Unverified)
      .value("WorkerFailed", RunStatus::WorkerFailed);

  py::class_<IterationLog>(m, "IterationLog")
      .def_readonly("iteration", &IterationLog::iteration)
      .def_readonly("time_ms", &IterationLog::time_ms)
      .def_readonly("residual_norm", &IterationLog::residual_norm)
      .def_readonly("omega", &IterationLog::omega);

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("engine", &RunRecord::engine)
      .def_readonly("status", &RunRecord::status)
      .def_readonly("converged", &RunRecord::converged)
      .def_readonly("diagnostic", &RunRecord::diagnostic)
      .def_readonly("history", &RunRecord::history)
      .def_readonly("global_iterations", &RunRecord::global_iterations)
      .def_readonly("patch_iterations", &RunRecord::patch_iterations)
      .def_readonly("trace_sources", &RunRecord::trace_sources)
      .def_readonly("final_relative_residual", &RunRecord::final_relative_residual)
      .def_readonly("wall_ms", &RunRecord::wall_ms)
      .def_readonly("u", &RunRecord::u)
      .def_readonly("p", &RunRecord::p)
      .def_readonly("p_iterates", &RunRecord::p_iterates)
      .def_readonly("r_iterates", &RunRecord::r_iterates)
      .def("history_csv", [](const RunRecord& r) { return history_csv(r); });

  m.def(
      "run_sync",
      [](const CouplingProblem& p, double omega, double tol, int max_iters, bool keep_iterates) {
        EngineOptions o;
        o.omega = omega;
        o.tol = tol;
        o.max_iters = max_iters;
        o.keep_iterates = keep_iterates;
        return run_sync(p, o);
      },
      py::arg("problem"), py::arg("omega") = 1.0, py::arg("tol") = 1e-8, py::arg("max_iters") = 10000,
      py::arg("keep_iterates") = false, py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_aitken",
      [](const CouplingProblem& p, double omega0, double tol, int max_iters) {
        EngineOptions o;
        o.omega = omega0;
        o.tol = tol;
        o.max_iters = max_iters;
        return run_aitken(p, o);
      },
      py::arg("problem"), py::arg("omega0") = 1.0, py::arg("tol") = 1e-8, py::arg("max_iters") = 10000,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_async",
      [](const CouplingProblem& p, double omega, int workers, const std::string& backend, const std::string& delay,
         double delay_value, std::uint64_t seed, int slow_worker, double slowdown, bool wait_for_all, double tol,
         int max_iters, bool keep_iterates) {
        AsyncOptions o;
        o.omega = omega;
        o.tol = tol;
        o.max_iters = max_iters;
        o.keep_iterates = keep_iterates;
        o.workers = workers;
        o.backend = backend_from_string(backend);
        o.schedule.mode = delay_mode_from_string(delay);
        o.schedule.delay = delay_value;
        o.schedule.seed = seed;
        o.schedule.slow_worker = slow_worker;
        o.schedule.slowdown = slowdown;
        o.wait_for_all = wait_for_all;
        return run_async(p, o);
      },
      py::arg("problem"), py::arg("omega") = 1.0, py::arg("workers") = 1, py::arg("backend") = "simulated",
      py::arg("delay") = "none", py::arg("delay_value") = 0.0, py::arg("seed") = 0, py::arg("slow_worker") = 0,
      py::arg("slowdown") = 1.0, py::arg("wait_for_all") = false, py::arg("tol") = 1e-8, py::arg("max_iters") = 10000,
      py::arg("keep_iterates") = false, py::call_guard<py::gil_scoped_release>());

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("name", &ScenarioConfig::name)
      .def_readwrite("beam", &ScenarioConfig::beam)
      .def_readwrite("omegas", &ScenarioConfig::omegas)
      .def_readwrite("tol", &ScenarioConfig::tol)
      .def_readwrite("max_iters", &ScenarioConfig::max_iters)
      .def_readwrite("oracle_cap", &ScenarioConfig::oracle_cap)
      .def_readwrite("workers", &ScenarioConfig::workers)
      .def_readwrite("out_dir", &ScenarioConfig::out_dir);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  py::class_<ResultRow>(m, "ResultRow")
      .def_readonly("scenario", &ResultRow::scenario)
      .def_property_readonly("mode", [](const ResultRow& r) { return to_string(r.mode); })
      .def_readonly("omega", &ResultRow::omega)
      .def_readonly("workers", &ResultRow::workers)
      .def_readonly("it_global", &ResultRow::it_global)
      .def_readonly("it_fine_min", &ResultRow::it_fine_min)
      .def_readonly("it_fine_max", &ResultRow::it_fine_max)
      .def_readonly("wall_ms", &ResultRow::wall_ms)
      .def_readonly("rel_residual", &ResultRow::rel_residual)
      .def_readonly("rel_error", &ResultRow::rel_error)
      .def_readonly("converged", &ResultRow::converged)
      .def_readonly("record", &ResultRow::record);

  py::class_<ScenarioOutcome>(m, "ScenarioOutcome")
      .def_readonly("rows", &ScenarioOutcome::rows)
      .def_readonly("problem_fingerprint", &ScenarioOutcome::problem_fingerprint)
      .def_readonly("interface_size", &ScenarioOutcome::interface_size)
      .def_readonly("reference_computed", &ScenarioOutcome::reference_computed)
      .def("results_csv", [](const ScenarioOutcome& o) { return results_csv(o.rows); });
  m.def("run_scenario", &run_scenario, py::arg("config"), py::call_guard<py::gil_scoped_release>());
}
