#pragma once

#include <cstddef>
#include <memory>

#include "glc/fem.hpp"

namespace glc {

/// Static condensation of one subdomain onto its interface DOFs.
///
/// The interior block K_ii is factorized once at construction. reaction()
/// and interior_recovery() each cost one interior solve and never touch an
/// explicit Schur complement; dense_schur() exists for oracles and for
/// assembling small condensed operators.
///
/// Immutable after construction: concurrent calls to the const members are safe.
class SchurHandle {
 public:
  /// Largest interface for which dense_schur() will materialize S.
  static constexpr Index kMaxDenseInterface = 3000;

  explicit SchurHandle(SubdomainModel model);

  int id() const { return model_->id; }
  const SubdomainModel& model() const { return *model_; }
  Index interface_size() const { return static_cast<Index>(boundary_.size()); }
  Index interior_size() const { return static_cast<Index>(interior_.size()); }

  /// b = f_b - K_bi K_ii^{-1} f_i
  const Vector& condensed_rhs() const { return rhs_; }

  /// lambda = S u_b - b
  Vector reaction(const Vector& u_b) const;

  /// Full-length displacement: solved interior, given u_b, zeros on Dirichlet DOFs.
  Vector interior_recovery(const Vector& u_b) const;

  /// S = K_bb - K_bi K_ii^{-1} K_ib, one interior solve per interface DOF.
  DenseMatrix dense_schur() const;

 private:
  Vector solve_interior(const Vector& rhs) const;

  std::shared_ptr<const SubdomainModel> model_;
  std::vector<Index> interior_;
  std::vector<Index> boundary_;
  SparseMatrix k_ii_;
  SparseMatrix k_ib_;
  SparseMatrix k_bb_;
  Vector f_i_;
  Vector f_b_;
  std::shared_ptr<const Eigen::SimplicialLDLT<SparseMatrix>> ldlt_;
  Vector rhs_;
};

SchurHandle condense(SubdomainModel model);

/// Matrix-level entry point: raw (K, f, interface) without a mesh.
SchurHandle condense(SparseMatrix stiffness, Vector load, std::vector<Index> interface_dofs,
                     std::vector<Index> dirichlet_dofs = {}, int id = 0);

/// Process-wide count of interior factorizations performed so far.
std::size_t factorization_count();

}  // namespace glc
