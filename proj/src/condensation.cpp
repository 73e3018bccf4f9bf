#include "glc/condensation.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

#include "glc/error.hpp"

namespace glc {
namespace {

std::atomic<std::size_t> g_factorizations{0};

// Relative pivot threshold below which K_ii is declared singular.
constexpr double kPivotTolerance = 1e-12;

}  // namespace

std::size_t factorization_count() { return g_factorizations.load(); }

SchurHandle::SchurHandle(SubdomainModel model)
    : model_(std::make_shared<const SubdomainModel>(std::move(model))) {
  const SubdomainModel& m = *model_;
  if (m.interface_dofs.empty()) {
    throw std::invalid_argument("condense: subdomain " + std::to_string(m.id) + " has no interface DOFs");
  }
  boundary_ = m.interface_dofs;
  interior_ = m.interior_dofs();
  k_ii_ = extract_block(m.stiffness, interior_, interior_);
  k_ib_ = extract_block(m.stiffness, interior_, boundary_);
  k_bb_ = extract_block(m.stiffness, boundary_, boundary_);
  f_i_ = gather(m.load, interior_);
  f_b_ = gather(m.load, boundary_);

  if (!interior_.empty()) {
    auto ldlt = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>(k_ii_);
    ++g_factorizations;
    bool ok = ldlt->info() == Eigen::Success;
    if (ok) {
      const Vector& d = ldlt->vectorD();
      const double dmax = d.cwiseAbs().maxCoeff();
      ok = d.minCoeff() > kPivotTolerance * dmax;
    }
    if (!ok) {
      throw SingularMatrixError("condense: interior block of subdomain " + std::to_string(m.id) +
                                " is singular (floating interior?)");
    }
    ldlt_ = std::move(ldlt);
  }
  rhs_ = f_b_;
  if (!interior_.empty()) rhs_ -= k_ib_.transpose() * solve_interior(f_i_);
}

Vector SchurHandle::solve_interior(const Vector& rhs) const {
  if (interior_.empty()) return Vector();
  return ldlt_->solve(rhs);
}

Vector SchurHandle::reaction(const Vector& u_b) const {
  if (u_b.size() != interface_size()) {
    throw std::invalid_argument("reaction: u_b has length " + std::to_string(u_b.size()) + ", expected " +
                                std::to_string(interface_size()));
  }
  Vector lambda = k_bb_ * u_b - f_b_;
  if (!interior_.empty()) {
    const Vector u_i = solve_interior(f_i_ - k_ib_ * u_b);
    lambda += k_ib_.transpose() * u_i;
  }
  return lambda;
}

Vector SchurHandle::interior_recovery(const Vector& u_b) const {
  if (u_b.size() != interface_size()) {
    throw std::invalid_argument("interior_recovery: u_b length mismatch");
  }
  Vector full = Vector::Zero(model_->num_dofs());
  for (std::size_t k = 0; k < boundary_.size(); ++k) full[boundary_[k]] = u_b[k];
  if (!interior_.empty()) {
    const Vector u_i = solve_interior(f_i_ - k_ib_ * u_b);
    for (std::size_t k = 0; k < interior_.size(); ++k) full[interior_[k]] = u_i[k];
  }
  return full;
}

DenseMatrix SchurHandle::dense_schur() const {
  if (interface_size() > kMaxDenseInterface) {
    throw std::length_error("dense_schur: interface of subdomain " + std::to_string(id()) + " exceeds " +
                            std::to_string(kMaxDenseInterface) + " DOFs");
  }
  DenseMatrix s = DenseMatrix(k_bb_);
  if (!interior_.empty()) {
    const DenseMatrix kib = DenseMatrix(k_ib_);
    const DenseMatrix x = ldlt_->solve(kib);
    s.noalias() -= kib.transpose() * x;
  }
  return 0.5 * (s + s.transpose());
}

SchurHandle condense(SubdomainModel model) { return SchurHandle(std::move(model)); }

SchurHandle condense(SparseMatrix stiffness, Vector load, std::vector<Index> interface_dofs,
                     std::vector<Index> dirichlet_dofs, int id) {
  return SchurHandle(
      make_model(std::move(stiffness), std::move(load), std::move(interface_dofs), std::move(dirichlet_dofs), id));
}

}  // namespace glc
