#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "glc/condensation.hpp"
#include "glc/fem.hpp"

namespace glc {

/// Global interface numbering plus the per-subdomain maps into it.
///
/// Subdomains are the coarse cubes, indexed 0..n-1. A subdomain is either a
/// patch (it has a fine model and an interpolator) or part of the
/// complementary zone (coarse only).
struct InterfaceSpace {
  Index size = 0;
  /// assembly[k][l] = global DOF of local interface DOF l of subdomain k.
  std::vector<std::vector<Index>> assembly;
  /// interpolators[k]: fine interface DOFs x coarse local interface DOFs. Empty for complementary subdomains.
  std::vector<SparseMatrix> interpolators;
  std::vector<bool> is_patch;

  int num_subdomains() const { return static_cast<int>(assembly.size()); }
  bool has_complementary() const;

  /// A^(k)^T x
  Vector restrict_to(int k, const Vector& global) const;
  /// global += A^(k) y
  void add_from(int k, const Vector& local, Vector& global) const;
};

/// Coarse kinematics on patch boundaries: evaluates the coarse trilinear shape
/// functions at each fine interface node. Coarse nodes carrying Dirichlet DOFs
/// are dropped (their value is zero).
SparseMatrix build_interpolator(const SubdomainModel& coarse, const SubdomainModel& fine);

/// Deduplicates coarse interface nodes by position (tolerance 1e-9 * edge_length)
/// and builds the assembly maps and interpolators. `fine[k]` is null for
/// complementary subdomains. Throws GeometryError on inconsistent node positions.
InterfaceSpace build_interface_space(const std::vector<SubdomainModel>& coarse,
                                     const std::vector<const SubdomainModel*>& fine, double edge_length);

struct GlobalSolution {
  Vector u;
  /// Coarse reaction of each complementary subdomain, in complementary_ids() order.
  std::vector<Vector> complementary_reactions;
};

struct ReferenceSolution {
  Vector u;
  /// Full fine displacement field per patch, in patch_ids() order.
  std::vector<Vector> patch_fields;
};

/// The assembled coupling problem. Immutable after construction; all const
/// members may be called concurrently.
class CouplingProblem {
 public:
  /// `fine[k]` empty for complementary subdomains. Assembles and factorizes S^G;
  /// throws SingularMatrixError when the Dirichlet conditions do not remove all rigid modes.
  CouplingProblem(std::vector<SchurHandle> coarse, std::vector<std::optional<SchurHandle>> fine, InterfaceSpace space);

  const InterfaceSpace& space() const { return space_; }
  Index interface_size() const { return space_.size; }
  int num_subdomains() const { return space_.num_subdomains(); }
  const std::vector<int>& patch_ids() const { return patch_ids_; }
  const std::vector<int>& complementary_ids() const { return complementary_ids_; }
  bool has_complementary() const { return !complementary_ids_.empty(); }
  const SchurHandle& coarse(int k) const { return coarse_[k]; }
  const SchurHandle& fine(int k) const;

  const Vector& global_rhs() const { return global_rhs_; }
  const Vector& reference_rhs() const { return reference_rhs_; }

  GlobalSolution global_solve(const Vector& p) const;

  /// Fine trace J A^T u_A for patch k.
  Vector fine_trace(int k, const Vector& u) const;
  /// lambda_F = S^F J A^T u_A - b^F for patch k.
  Vector fine_local_solve(int k, const Vector& u) const;
  /// Patch response in coarse local numbering from a coarse local trace: J^T lambda_F(J trace).
  Vector patch_response(int k, const Vector& coarse_trace) const;

  /// r = -A^(0) lambda^(0) - sum_s A^(s) J^(s)T lambda_F^(s).
  /// `complementary` in complementary_ids() order, `fine_reactions` in patch_ids() order.
  Vector assemble_residual(const std::vector<Vector>& complementary, const std::vector<Vector>& fine_reactions) const;
  /// Same residual from per-subdomain coarse-side contributions q (lambda^(0) or J^T lambda_F).
  Vector assemble_residual_q(const std::vector<Vector>& q) const;

  /// Monolithic condensed reference: solves S^R u_R = b^R with explicit per-patch Schur complements.
  ReferenceSolution reference_solve() const;

  /// Dense S^G and S^R, for tests on small problems.
  DenseMatrix dense_global_operator() const;
  DenseMatrix dense_reference_operator() const;

  /// Hash of the operators' defining data (sizes, maps, condensed right-hand sides).
  std::uint64_t fingerprint() const;

 private:
  SparseMatrix assemble_operator(bool reference) const;

  std::vector<SchurHandle> coarse_;
  std::vector<std::optional<SchurHandle>> fine_;
  InterfaceSpace space_;
  std::vector<int> patch_ids_;
  std::vector<int> complementary_ids_;
  Vector global_rhs_;
  Vector reference_rhs_;
  std::shared_ptr<const Eigen::SimplicialLDLT<SparseMatrix>> global_factor_;
};

/// Which cube faces join the coupling interface.
enum class InterfaceFaces {
  Shared,  // only faces shared with a neighbouring cube
  All,     // every face except the clamped one
};

/// A beam made of cubes on an nx*ny*nz grid. Coarse cubes are homogeneous;
/// fine patches are refined and carry a soft spherical inclusion.
struct BeamSpec {
  std::array<int, 3> grid{2, 2, 2};
  int coarse_elems = 4;
  int fine_elems = 8;
  double edge_length = 1.0;
  double e_matrix = 1.0;
  double e_ratio = 10.0;
  double nu = 0.3;
  double inclusion_radius = 0.6;
  Point3 body_load{1.0, 1.0, 1.0};
  Face clamp = Face::ZMinus;
  InterfaceFaces interface_faces = InterfaceFaces::Shared;
  /// Cube indices (x fastest) kept coarse-only.
  std::vector<int> complementary;
  /// Fine model identical to the coarse one (same mesh, homogeneous).
  bool fine_equals_coarse = false;

  int num_cubes() const { return grid[0] * grid[1] * grid[2]; }
  /// Total DOFs of the reference discretization (complementary coarse + fine patches).
  Index reference_dofs() const;
};

CouplingProblem build_beam_problem(const BeamSpec& spec);

}  // namespace glc
