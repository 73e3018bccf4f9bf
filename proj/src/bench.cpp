#include "glc/bench.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "glc/error.hpp"
#include "json.hpp"

namespace glc {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

template <class F>
auto as_list(const std::string& key, const std::string& v, F convert) {
  std::vector<decltype(convert(key, v))> out;
  for (const auto& item : split_list(v)) out.push_back(convert(key, item));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

template <class F>
auto wrap(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(key, ex.what());
  }
}

using Setter = void (*)(ScenarioConfig&, const std::string& key, const std::string& value);

// section -> key -> setter
const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"scenario",
       {
           {"name", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.name = v; }},
       }},
      {"geometry",
       {
           {"grid",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              const auto g = as_list(k, v, to_int);
              if (g.size() != 3) throw ConfigError(k, "expected three integers nx,ny,nz");
              for (int d = 0; d < 3; ++d) c.beam.grid[d] = static_cast<int>(g[d]);
            }},
           {"coarse_elems",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.beam.coarse_elems = static_cast<int>(to_int(k, v));
            }},
           {"fine_elems",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.beam.fine_elems = static_cast<int>(to_int(k, v));
            }},
           {"edge_length",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.beam.edge_length = to_double(k, v); }},
           {"clamp",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.beam.clamp = wrap(k, [&] { return face_from_string(v); });
            }},
           {"interface",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              if (v == "shared") c.beam.interface_faces = InterfaceFaces::Shared;
              else if (v == "all") c.beam.interface_faces = InterfaceFaces::All;
              else throw ConfigError(k, "expected 'shared' or 'all'");
            }},
           {"complementary",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.beam.complementary.clear();
              for (long long i : split_list(v).empty() ? std::vector<long long>{} : as_list(k, v, to_int)) {
                c.beam.complementary.push_back(static_cast<int>(i));
              }
            }},
           {"fine_equals_coarse",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.beam.fine_equals_coarse = to_bool(k, v);
            }},
       }},
      {"material",
       {
           {"E_matrix",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.beam.e_matrix = to_double(k, v); }},
           {"E_ratio",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.beam.e_ratio = to_double(k, v); }},
           {"nu", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.beam.nu = to_double(k, v); }},
           {"inclusion_radius",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.beam.inclusion_radius = to_double(k, v);
            }},
           {"body_load",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              const auto f = as_list(k, v, to_double);
              if (f.size() != 3) throw ConfigError(k, "expected three numbers fx,fy,fz");
              for (int d = 0; d < 3; ++d) c.beam.body_load[d] = f[d];
            }},
       }},
      {"solver",
       {
           {"mode",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.modes.clear();
              for (const auto& m : split_list(v)) c.modes.push_back(wrap(k, [&] { return mode_from_string(m); }));
              if (c.modes.empty()) throw ConfigError(k, "empty list");
            }},
           {"omega",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.omegas = as_list(k, v, to_double); }},
           {"omega0",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.omega0 = to_double(k, v); }},
           {"tol", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.tol = to_double(k, v); }},
           {"max_iters",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.max_iters = static_cast<int>(to_int(k, v));
            }},
           {"oracle_cap",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.oracle_cap = to_int(k, v); }},
       }},
      {"async",
       {
           {"workers",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.workers.clear();
              for (long long w : as_list(k, v, to_int)) c.workers.push_back(static_cast<int>(w));
            }},
           {"backend",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.backend = wrap(k, [&] { return backend_from_string(v); });
            }},
           {"delay",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.schedule.mode = wrap(k, [&] { return delay_mode_from_string(v); });
            }},
           {"delay_value",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.schedule.delay = to_double(k, v); }},
           {"slow_worker",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              c.schedule.slow_worker = static_cast<int>(to_int(k, v));
            }},
           {"slowdown",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.schedule.slowdown = to_double(k, v); }},
           {"seed",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) {
              const long long s = to_int(k, v);
              if (s < 0) throw ConfigError(k, "must be >= 0");
              c.schedule.seed = static_cast<std::uint64_t>(s);
            }},
           {"solve_cost",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.solve_cost = to_double(k, v); }},
           {"global_cost",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.global_cost = to_double(k, v); }},
           {"verify", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.verify = to_bool(k, v); }},
       }},
      {"output",
       {
           {"dir", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
           {"dump_mesh",
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.dump_mesh = to_bool(k, v); }},
       }},
  };
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double rel_error(const Vector& u, const Vector& ref) {
  const double n = ref.norm();
  return n > 0.0 ? (u - ref).norm() / n : (u - ref).norm();
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Sync: return "sync";
    case Mode::Aitken: return "aitken";
    case Mode::Async: return "async";
    case Mode::SyncParallel: return "sync-parallel";
  }
  return "sync";
}

Mode mode_from_string(const std::string& s) {
  if (s == "sync") return Mode::Sync;
  if (s == "aitken") return Mode::Aitken;
  if (s == "async") return Mode::Async;
  if (s == "sync-parallel") return Mode::SyncParallel;
  throw std::invalid_argument("unknown mode '" + s + "' (sync, aitken, async, sync-parallel)");
}

void validate(const ScenarioConfig& c) {
  const BeamSpec& b = c.beam;
  for (int d = 0; d < 3; ++d) {
    if (b.grid[d] < 1) throw ConfigError("grid", "dimensions must be >= 1");
  }
  if (b.coarse_elems < 1) throw ConfigError("coarse_elems", "must be >= 1");
  if (b.fine_elems < 1) throw ConfigError("fine_elems", "must be >= 1");
  if (b.fine_elems % b.coarse_elems != 0) {
    throw ConfigError("fine_elems", "must be an integer multiple of coarse_elems");
  }
  if (!(b.edge_length > 0.0)) throw ConfigError("edge_length", "must be > 0");
  if (!(b.e_matrix > 0.0)) throw ConfigError("E_matrix", "must be > 0");
  if (!(b.e_ratio > 0.0)) throw ConfigError("E_ratio", "must be > 0");
  if (!(b.nu >= 0.0 && b.nu < 0.5)) throw ConfigError("nu", "must satisfy 0 <= nu < 0.5");
  if (!(b.inclusion_radius >= 0.0 && b.inclusion_radius < 1.0)) {
    throw ConfigError("inclusion_radius", "must lie in [0, 1)");
  }
  for (int k : b.complementary) {
    if (k < 0 || k >= b.num_cubes()) throw ConfigError("complementary", "cube index out of range");
  }
  if (static_cast<int>(b.complementary.size()) >= b.num_cubes()) {
    throw ConfigError("complementary", "at least one cube must be a patch");
  }
  if (c.modes.empty()) throw ConfigError("mode", "required");
  for (double w : c.omegas) {
    if (!(w > 0.0)) throw ConfigError("omega", "must be > 0");
  }
  if (c.omega0 && !(*c.omega0 > 0.0)) throw ConfigError("omega0", "must be > 0");
  if (!(c.tol > 0.0)) throw ConfigError("tol", "must be > 0");
  if (c.max_iters < 1) throw ConfigError("max_iters", "must be >= 1");
  if (c.oracle_cap < 0) throw ConfigError("oracle_cap", "must be >= 0");
  for (int w : c.workers) {
    if (w < 1) throw ConfigError("workers", "must be >= 1");
  }
  if (!(c.schedule.delay >= 0.0)) throw ConfigError("delay_value", "must be >= 0");
  if (!(c.schedule.slowdown >= 1.0)) throw ConfigError("slowdown", "must be >= 1");
  if (c.schedule.slow_worker < 0) throw ConfigError("slow_worker", "must be >= 0");
  if (!(c.solve_cost >= 0.0)) throw ConfigError("solve_cost", "must be >= 0");
  if (!(c.global_cost >= 0.0)) throw ConfigError("global_cost", "must be >= 0");
}

ScenarioConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& ex) {
    throw ConfigError("", std::string("malformed config: ") + ex.message() + " at line " + std::to_string(ex.line()));
  }

  ScenarioConfig c;
  const auto& sch = schema();
  for (const auto& [section, body] : tree) {
    const auto sec = sch.find(section);
    if (sec == sch.end()) {
      if (body.empty() && !body.data().empty()) throw ConfigError(section, "key outside of any section");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      const auto it = sec->second.find(key);
      if (it == sec->second.end()) throw ConfigError(key, "unknown key in section [" + section + "]");
      it->second(c, key, trim(value.data()));
    }
  }
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ScenarioOutcome run_scenario(const ScenarioConfig& config) {
  validate(config);
  ScenarioOutcome out;
  const CouplingProblem problem = build_beam_problem(config.beam);
  out.problem_fingerprint = problem.fingerprint();
  out.interface_size = problem.interface_size();

  std::optional<Vector> reference;
  if (config.beam.reference_dofs() <= config.oracle_cap) {
    reference = problem.reference_solve().u;
    out.reference_computed = true;
  }

  const int num_patches = static_cast<int>(problem.patch_ids().size());
  std::vector<int> worker_counts = config.workers;
  if (worker_counts.empty()) worker_counts.push_back(num_patches);

  auto finish_row = [&](ResultRow row, RunRecord rec) {
    row.it_global = rec.global_iterations;
    if (!rec.patch_iterations.empty()) {
      row.it_fine_min = *std::min_element(rec.patch_iterations.begin(), rec.patch_iterations.end());
      row.it_fine_max = *std::max_element(rec.patch_iterations.begin(), rec.patch_iterations.end());
    }
    row.wall_ms = rec.wall_ms;
    row.rel_residual = rec.final_relative_residual;
    row.converged = rec.converged;
    if (reference) row.rel_error = rel_error(rec.u, *reference);
    row.record = std::move(rec);
    out.rows.push_back(std::move(row));
  };

  for (Mode mode : config.modes) {
    EngineOptions base;
    base.tol = config.tol;
    base.max_iters = config.max_iters;

    if (mode == Mode::Aitken) {
      EngineOptions opt = base;
      opt.omega = config.omega0.value_or(config.omegas.front());
      ResultRow row{config.name, mode, opt.omega};
      finish_row(std::move(row), run_aitken(problem, opt));
      continue;
    }
    for (double omega : config.omegas) {
      if (mode == Mode::Sync) {
        EngineOptions opt = base;
        opt.omega = omega;
        finish_row(ResultRow{config.name, mode, omega}, run_sync(problem, opt));
        continue;
      }
      for (int w : worker_counts) {
        AsyncOptions opt;
        static_cast<EngineOptions&>(opt) = base;
        opt.omega = omega;
        opt.workers = w;
        opt.backend = config.backend;
        opt.schedule = config.schedule;
        opt.solve_cost = config.solve_cost;
        opt.global_cost = config.global_cost;
        opt.verify = config.verify;
        opt.wait_for_all = mode == Mode::SyncParallel;
        ResultRow row{config.name + "/w" + std::to_string(std::min(w, num_patches)), mode, omega,
                      std::min(w, num_patches)};
        finish_row(std::move(row), run_async(problem, opt));
      }
    }
  }

  if (!config.out_dir.empty()) {
    emit_report(out, config.out_dir);
    if (config.dump_mesh) {
      for (int k = 0; k < problem.num_subdomains(); ++k) {
        std::ofstream os(std::filesystem::path(config.out_dir) / ("mesh_coarse_" + std::to_string(k) + ".txt"));
        dump_mesh(*problem.coarse(k).model().mesh, os);
      }
      for (int k : problem.patch_ids()) {
        std::ofstream os(std::filesystem::path(config.out_dir) / ("mesh_fine_" + std::to_string(k) + ".txt"));
        dump_mesh(*problem.fine(k).model().mesh, os);
      }
    }
  }
  return out;
}

std::string history_csv(const RunRecord& record) {
  std::string s = std::string(kHistoryHeader) + "\n";
  for (const IterationLog& h : record.history) {
    s += std::to_string(h.iteration) + "," + fmt_full(h.time_ms) + "," + fmt_full(h.residual_norm) + "," +
         fmt_full(h.omega) + "\n";
  }
  return s;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string s = std::string(kResultsHeader) + "\n";
  for (const ResultRow& r : rows) {
    s += r.scenario + "," + to_string(r.mode) + "," + fmt(r.omega) + "," + std::to_string(r.it_global) + "," +
         std::to_string(r.it_fine_min) + "," + std::to_string(r.it_fine_max) + "," + fmt(r.wall_ms) + "," +
         fmt(r.rel_residual) + "," + (r.rel_error ? fmt(*r.rel_error) : std::string()) + "," +
         (r.converged ? "true" : "false") + "\n";
  }
  return s;
}

void emit_report(const ScenarioOutcome& outcome, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("emit_report: cannot write " + p.string());
    os << text;
    if (!os) throw std::runtime_error("emit_report: write failed for " + p.string());
  };

  write(dir / "results.csv", results_csv(outcome.rows));

  nlohmann::json summary;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(outcome.problem_fingerprint));
  summary["problem_fingerprint"] = hash;
  summary["interface_size"] = outcome.interface_size;
  summary["reference_computed"] = outcome.reference_computed;
  summary["rows"] = nlohmann::json::array();
  for (std::size_t i = 0; i < outcome.rows.size(); ++i) {
    const ResultRow& r = outcome.rows[i];
    const std::string hist = "history_" + std::to_string(i) + ".csv";
    write(dir / hist, history_csv(r.record));

    nlohmann::json row;
    row["scenario"] = r.scenario;
    row["mode"] = to_string(r.mode);
    row["omega"] = r.omega;
    row["workers"] = r.workers;
    row["it_global"] = r.it_global;
    row["it_fine_min"] = r.it_fine_min;
    row["it_fine_max"] = r.it_fine_max;
    row["it_fine"] = r.record.patch_iterations;
    row["wall_ms"] = r.wall_ms;
    row["rel_residual"] = r.rel_residual;
    row["rel_error"] = r.rel_error ? nlohmann::json(*r.rel_error) : nlohmann::json(nullptr);
    row["converged"] = r.converged;
    row["status"] = to_string(r.record.status);
    row["diagnostic"] = r.record.diagnostic;
    row["history_file"] = hist;
    nlohmann::json hjs = nlohmann::json::array();
    for (const IterationLog& h : r.record.history) {
      hjs.push_back({{"iter", h.iteration}, {"time_ms", h.time_ms}, {"residual_norm", h.residual_norm},
                     {"omega", h.omega}});
    }
    row["history"] = std::move(hjs);
    row["trace_sources"] = r.record.trace_sources;
    summary["rows"].push_back(std::move(row));
  }
  write(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace glc
