#include "glc/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "glc/error.hpp"

namespace glc {
namespace {

constexpr double kDedupTolerance = 1e-9;   // relative to edge length
constexpr double kSnapTolerance = 1e-10;   // parametric coordinate snapping
constexpr double kPivotTolerance = 1e-12;

struct KeyHash {
  std::size_t operator()(const std::array<std::int64_t, 3>& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : k) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

std::string format_point(const Point3& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << p[0] << ", " << p[1] << ", " << p[2] << ')';
  return os.str();
}

std::unordered_map<Index, Index> position_map(const std::vector<Index>& dofs) {
  std::unordered_map<Index, Index> m;
  m.reserve(dofs.size());
  for (std::size_t k = 0; k < dofs.size(); ++k) m.emplace(dofs[k], static_cast<Index>(k));
  return m;
}

std::shared_ptr<const Eigen::SimplicialLDLT<SparseMatrix>> factor_spd(const SparseMatrix& a, const std::string& what) {
  auto ldlt = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>(a);
  bool ok = ldlt->info() == Eigen::Success;
  if (ok && a.rows() > 0) {
    const Vector& d = ldlt->vectorD();
    ok = d.minCoeff() > kPivotTolerance * d.cwiseAbs().maxCoeff();
  }
  if (!ok) throw SingularMatrixError(what);
  return ldlt;
}

void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
}

}  // namespace

bool InterfaceSpace::has_complementary() const {
  return std::any_of(is_patch.begin(), is_patch.end(), [](bool p) { return !p; });
}

Vector InterfaceSpace::restrict_to(int k, const Vector& global) const {
  const auto& map = assembly[k];
  Vector out(static_cast<Index>(map.size()));
  for (std::size_t l = 0; l < map.size(); ++l) out[l] = global[map[l]];
  return out;
}

void InterfaceSpace::add_from(int k, const Vector& local, Vector& global) const {
  const auto& map = assembly[k];
  if (local.size() != static_cast<Index>(map.size())) {
    throw std::invalid_argument("add_from: local vector of subdomain " + std::to_string(k) + " has wrong length");
  }
  for (std::size_t l = 0; l < map.size(); ++l) global[map[l]] += local[l];
}

SparseMatrix build_interpolator(const SubdomainModel& coarse, const SubdomainModel& fine) {
  if (!coarse.mesh || !fine.mesh) throw std::invalid_argument("build_interpolator: models need meshes");
  const StructuredMesh& cm = *coarse.mesh;
  const StructuredMesh& fm = *fine.mesh;
  const int ne = cm.elems_per_edge;
  const double h = cm.edge_length / ne;

  const auto coarse_pos = position_map(coarse.interface_dofs);
  const auto& clamped = coarse.dirichlet_dofs;

  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t row = 0; row < fine.interface_dofs.size(); ++row) {
    const Index fdof = fine.interface_dofs[row];
    const int comp = static_cast<int>(fdof % 3);
    const Point3& x = fm.node_coords[fdof / 3];

    int cell[3];
    double xi[3];
    for (int d = 0; d < 3; ++d) {
      const double local = (x[d] - cm.origin[d]) / h;
      int c = static_cast<int>(std::floor(local + kSnapTolerance));
      c = std::clamp(c, 0, ne - 1);
      double t = local - c;
      if (std::abs(t) < kSnapTolerance) t = 0.0;
      if (std::abs(t - 1.0) < kSnapTolerance) t = 1.0;
      if (t < 0.0 || t > 1.0) {
        throw GeometryError("build_interpolator: fine node " + format_point(x) + " lies outside coarse cube " +
                            std::to_string(coarse.id));
      }
      cell[d] = c;
      xi[d] = t;
    }
    for (int a = 0; a < 8; ++a) {
      const int di = a & 1, dj = (a >> 1) & 1, dk = (a >> 2) & 1;
      const double w = (di ? xi[0] : 1 - xi[0]) * (dj ? xi[1] : 1 - xi[1]) * (dk ? xi[2] : 1 - xi[2]);
      if (w == 0.0) continue;
      const Index cdof = 3 * cm.node_index(cell[0] + di, cell[1] + dj, cell[2] + dk) + comp;
      if (auto it = coarse_pos.find(cdof); it != coarse_pos.end()) {
        trips.emplace_back(static_cast<Index>(row), it->second, w);
      } else if (!std::binary_search(clamped.begin(), clamped.end(), cdof)) {
        throw GeometryError("build_interpolator: fine interface node " + format_point(x) +
                            " depends on a coarse node off the interface of subdomain " + std::to_string(coarse.id));
      }
    }
  }
  SparseMatrix j(static_cast<Index>(fine.interface_dofs.size()), static_cast<Index>(coarse.interface_dofs.size()));
  j.setFromTriplets(trips.begin(), trips.end());
  return j;
}

InterfaceSpace build_interface_space(const std::vector<SubdomainModel>& coarse,
                                     const std::vector<const SubdomainModel*>& fine, double edge_length) {
  if (coarse.size() != fine.size()) throw std::invalid_argument("build_interface_space: coarse/fine count mismatch");
  const double tol = kDedupTolerance * edge_length;

  using Key = std::array<std::int64_t, 3>;
  std::unordered_map<Key, Index, KeyHash> node_ids;
  std::vector<Point3> node_pos;

  auto key_of = [&](const Point3& p) {
    return Key{std::llround(p[0] / tol), std::llround(p[1] / tol), std::llround(p[2] / tol)};
  };
  auto lookup = [&](const Point3& p) -> Index {
    const Key key = key_of(p);
    if (auto it = node_ids.find(key); it != node_ids.end()) return it->second;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          if (auto it = node_ids.find(Key{key[0] + dx, key[1] + dy, key[2] + dz}); it != node_ids.end()) {
            throw GeometryError("build_interface_space: nodes " + format_point(p) + " and " +
                                format_point(node_pos[it->second]) + " are within tolerance but not identical");
          }
        }
      }
    }
    const Index id = static_cast<Index>(node_pos.size());
    node_ids.emplace(key, id);
    node_pos.push_back(p);
    return id;
  };

  InterfaceSpace space;
  space.assembly.resize(coarse.size());
  space.interpolators.resize(coarse.size());
  space.is_patch.resize(coarse.size());
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const SubdomainModel& m = coarse[k];
    if (!m.mesh) throw std::invalid_argument("build_interface_space: coarse model without mesh");
    auto& map = space.assembly[k];
    map.reserve(m.interface_dofs.size());
    for (Index dof : m.interface_dofs) {
      map.push_back(3 * lookup(m.mesh->node_coords[dof / 3]) + dof % 3);
    }
    space.is_patch[k] = fine[k] != nullptr;
    if (fine[k] != nullptr) space.interpolators[k] = build_interpolator(m, *fine[k]);
  }
  space.size = 3 * static_cast<Index>(node_pos.size());
  return space;
}

CouplingProblem::CouplingProblem(std::vector<SchurHandle> coarse, std::vector<std::optional<SchurHandle>> fine,
                                 InterfaceSpace space)
    : coarse_(std::move(coarse)), fine_(std::move(fine)), space_(std::move(space)) {
  const int n = static_cast<int>(coarse_.size());
  if (static_cast<int>(fine_.size()) != n || space_.num_subdomains() != n ||
      static_cast<int>(space_.is_patch.size()) != n || static_cast<int>(space_.interpolators.size()) != n) {
    throw std::invalid_argument("CouplingProblem: subdomain counts disagree");
  }
  for (int k = 0; k < n; ++k) {
    if (static_cast<Index>(space_.assembly[k].size()) != coarse_[k].interface_size()) {
      throw std::invalid_argument("CouplingProblem: assembly map of subdomain " + std::to_string(k) +
                                  " does not match its interface");
    }
    for (Index g : space_.assembly[k]) {
      if (g < 0 || g >= space_.size) throw std::invalid_argument("CouplingProblem: assembly index out of range");
    }
    if (space_.is_patch[k] != fine_[k].has_value()) {
      throw std::invalid_argument("CouplingProblem: patch flag of subdomain " + std::to_string(k) +
                                  " disagrees with fine model presence");
    }
    if (space_.is_patch[k]) {
      const SparseMatrix& j = space_.interpolators[k];
      if (j.rows() != fine_[k]->interface_size() || j.cols() != coarse_[k].interface_size()) {
        throw std::invalid_argument("CouplingProblem: interpolator of patch " + std::to_string(k) + " has wrong shape");
      }
      patch_ids_.push_back(k);
    } else {
      complementary_ids_.push_back(k);
    }
  }

  global_rhs_ = Vector::Zero(space_.size);
  reference_rhs_ = Vector::Zero(space_.size);
  for (int k = 0; k < n; ++k) {
    space_.add_from(k, coarse_[k].condensed_rhs(), global_rhs_);
    if (space_.is_patch[k]) {
      space_.add_from(k, space_.interpolators[k].transpose() * fine_[k]->condensed_rhs(), reference_rhs_);
    } else {
      space_.add_from(k, coarse_[k].condensed_rhs(), reference_rhs_);
    }
  }

  global_factor_ = factor_spd(assemble_operator(false),
                              "CouplingProblem: global condensed operator is singular (insufficient Dirichlet conditions)");
}

const SchurHandle& CouplingProblem::fine(int k) const {
  if (k < 0 || k >= num_subdomains() || !fine_[k]) {
    throw std::out_of_range("subdomain " + std::to_string(k) + " is not a patch");
  }
  return *fine_[k];
}

SparseMatrix CouplingProblem::assemble_operator(bool reference) const {
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < num_subdomains(); ++k) {
    DenseMatrix s;
    if (reference && space_.is_patch[k]) {
      const SparseMatrix& j = space_.interpolators[k];
      const DenseMatrix sf = fine_[k]->dense_schur();
      s = j.transpose() * (sf * j);
    } else {
      s = coarse_[k].dense_schur();
    }
    const auto& map = space_.assembly[k];
    for (Index c = 0; c < s.cols(); ++c) {
      for (Index r = 0; r < s.rows(); ++r) {
        if (s(r, c) != 0.0) trips.emplace_back(map[r], map[c], s(r, c));
      }
    }
  }
  SparseMatrix a(space_.size, space_.size);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

GlobalSolution CouplingProblem::global_solve(const Vector& p) const {
  if (p.size() != space_.size) throw std::invalid_argument("global_solve: p has wrong length");
  GlobalSolution sol;
  sol.u = global_factor_->solve(global_rhs_ + p);
  for (int k : complementary_ids_) sol.complementary_reactions.push_back(coarse_[k].reaction(space_.restrict_to(k, sol.u)));
  return sol;
}

Vector CouplingProblem::fine_trace(int k, const Vector& u) const {
  fine(k);  // validates k
  if (u.size() != space_.size) throw std::invalid_argument("fine_trace: u has wrong length");
  return space_.interpolators[k] * space_.restrict_to(k, u);
}

Vector CouplingProblem::fine_local_solve(int k, const Vector& u) const { return fine(k).reaction(fine_trace(k, u)); }

Vector CouplingProblem::patch_response(int k, const Vector& coarse_trace) const {
  const SchurHandle& f = fine(k);
  const SparseMatrix& j = space_.interpolators[k];
  if (coarse_trace.size() != j.cols()) throw std::invalid_argument("patch_response: trace has wrong length");
  return j.transpose() * f.reaction(j * coarse_trace);
}

Vector CouplingProblem::assemble_residual(const std::vector<Vector>& complementary,
                                          const std::vector<Vector>& fine_reactions) const {
  if (complementary.size() != complementary_ids_.size() || fine_reactions.size() != patch_ids_.size()) {
    throw std::invalid_argument("assemble_residual: expected " + std::to_string(complementary_ids_.size()) +
                                " complementary and " + std::to_string(patch_ids_.size()) + " patch reactions");
  }
  Vector r = Vector::Zero(space_.size);
  for (std::size_t i = 0; i < complementary_ids_.size(); ++i) space_.add_from(complementary_ids_[i], complementary[i], r);
  for (std::size_t i = 0; i < patch_ids_.size(); ++i) {
    const int k = patch_ids_[i];
    const SparseMatrix& j = space_.interpolators[k];
    if (fine_reactions[i].size() != j.rows()) {
      throw std::invalid_argument("assemble_residual: reaction of patch " + std::to_string(k) + " has wrong length");
    }
    space_.add_from(k, j.transpose() * fine_reactions[i], r);
  }
  return -r;
}

Vector CouplingProblem::assemble_residual_q(const std::vector<Vector>& q) const {
  if (static_cast<int>(q.size()) != num_subdomains()) throw std::invalid_argument("assemble_residual_q: wrong count");
  Vector r = Vector::Zero(space_.size);
  for (int k = 0; k < num_subdomains(); ++k) space_.add_from(k, q[k], r);
  return -r;
}

ReferenceSolution CouplingProblem::reference_solve() const {
  const auto factor = factor_spd(assemble_operator(true), "reference_solve: reference operator is singular");
  ReferenceSolution ref;
  ref.u = factor->solve(reference_rhs_);
  for (int k : patch_ids_) ref.patch_fields.push_back(fine_[k]->interior_recovery(fine_trace(k, ref.u)));
  return ref;
}

DenseMatrix CouplingProblem::dense_global_operator() const { return DenseMatrix(assemble_operator(false)); }

DenseMatrix CouplingProblem::dense_reference_operator() const { return DenseMatrix(assemble_operator(true)); }

std::uint64_t CouplingProblem::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  fnv_mix(h, &space_.size, sizeof(space_.size));
  for (int k = 0; k < num_subdomains(); ++k) {
    const auto& map = space_.assembly[k];
    fnv_mix(h, map.data(), map.size() * sizeof(Index));
    const bool patch = space_.is_patch[k];
    fnv_mix(h, &patch, sizeof(patch));
  }
  fnv_mix(h, global_rhs_.data(), global_rhs_.size() * sizeof(double));
  fnv_mix(h, reference_rhs_.data(), reference_rhs_.size() * sizeof(double));
  return h;
}

// ---------------------------------------------------------------------------
// Beam builder

Index BeamSpec::reference_dofs() const {
  const Index coarse = 3 * static_cast<Index>(std::pow(coarse_elems + 1, 3));
  const Index fine = 3 * static_cast<Index>(std::pow((fine_equals_coarse ? coarse_elems : fine_elems) + 1, 3));
  const Index ncomp = static_cast<Index>(complementary.size());
  return ncomp * coarse + (num_cubes() - ncomp) * fine;
}

namespace {

SubdomainModel cube_model(const StructuredMesh& mesh, const MaterialField& mat, const Point3& load,
                          const std::vector<Face>& iface_faces, std::optional<Face> clamp, int id) {
  SubdomainModel m = assemble(mesh, mat, load);
  m.id = id;
  std::vector<Index> clamped;
  if (clamp) clamped = extract_interface(mesh, {*clamp}).dofs;
  m = apply_dirichlet(std::move(m), clamped);
  std::vector<Index> iface;
  if (!iface_faces.empty()) {
    for (Index d : extract_interface(mesh, iface_faces).dofs) {
      if (!std::binary_search(clamped.begin(), clamped.end(), d)) iface.push_back(d);
    }
  }
  return with_interface(std::move(m), std::move(iface));
}

}  // namespace

CouplingProblem build_beam_problem(const BeamSpec& spec) {
  for (int d = 0; d < 3; ++d) {
    if (spec.grid[d] < 1) throw std::invalid_argument("build_beam_problem: grid dimensions must be >= 1");
  }
  const int n = spec.num_cubes();
  std::vector<bool> patch(n, true);
  for (int c : spec.complementary) {
    if (c < 0 || c >= n) throw std::invalid_argument("build_beam_problem: complementary cube index out of range");
    patch[c] = false;
  }

  const int clamp_axis = face_axis(spec.clamp);
  const bool clamp_plus = face_is_plus(spec.clamp);

  std::vector<SubdomainModel> coarse_models;
  std::vector<std::optional<SubdomainModel>> fine_models(n);
  coarse_models.reserve(n);
  for (int c = 0; c < n; ++c) {
    const int idx[3] = {c % spec.grid[0], (c / spec.grid[0]) % spec.grid[1], c / (spec.grid[0] * spec.grid[1])};
    const Point3 origin{idx[0] * spec.edge_length, idx[1] * spec.edge_length, idx[2] * spec.edge_length};

    const bool on_clamp = clamp_plus ? idx[clamp_axis] == spec.grid[clamp_axis] - 1 : idx[clamp_axis] == 0;
    std::optional<Face> clamp;
    if (on_clamp) clamp = spec.clamp;

    std::vector<Face> faces;
    for (Face f : kAllFaces) {
      const int axis = face_axis(f);
      const int nb = idx[axis] + (face_is_plus(f) ? 1 : -1);
      const bool shared = nb >= 0 && nb < spec.grid[axis];
      const bool wanted = spec.interface_faces == InterfaceFaces::All ? !(clamp && f == *clamp) : shared;
      if (wanted) faces.push_back(f);
    }
    if (faces.empty()) {
      throw std::invalid_argument("build_beam_problem: cube " + std::to_string(c) +
                                  " has no interface faces (use the 'all' interface mode for a single cube)");
    }

    const StructuredMesh cmesh = build_cube_mesh(spec.coarse_elems, origin, spec.edge_length);
    const MaterialField cmat = assign_inclusion(cmesh, spec.e_matrix, spec.e_ratio, spec.nu, 0.0);
    coarse_models.push_back(cube_model(cmesh, cmat, spec.body_load, faces, clamp, c));

    if (patch[c]) {
      if (spec.fine_equals_coarse) {
        fine_models[c] = coarse_models.back();
      } else {
        const StructuredMesh fmesh = build_cube_mesh(spec.fine_elems, origin, spec.edge_length);
        const MaterialField fmat = assign_inclusion(fmesh, spec.e_matrix, spec.e_ratio, spec.nu, spec.inclusion_radius);
        fine_models[c] = cube_model(fmesh, fmat, spec.body_load, faces, clamp, c);
      }
    }
  }

  std::vector<const SubdomainModel*> fine_ptrs(n, nullptr);
  for (int c = 0; c < n; ++c) {
    if (fine_models[c]) fine_ptrs[c] = &*fine_models[c];
  }
  InterfaceSpace space = build_interface_space(coarse_models, fine_ptrs, spec.edge_length);

  std::vector<SchurHandle> coarse;
  std::vector<std::optional<SchurHandle>> fine(n);
  coarse.reserve(n);
  for (int c = 0; c < n; ++c) {
    coarse.push_back(condense(std::move(coarse_models[c])));
    if (fine_models[c]) fine[c] = condense(std::move(*fine_models[c]));
  }
  return CouplingProblem(std::move(coarse), std::move(fine), std::move(space));
}

}  // namespace glc
