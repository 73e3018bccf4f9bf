#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <memory>
#include <vector>

#include "glc/mesh.hpp"

namespace glc {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using ElementMatrix = Eigen::Matrix<double, 24, 24>;

/// One subdomain's discrete operator: stiffness, load, and the DOF partition
/// into interface (b), Dirichlet, and interior (everything else).
///
/// DOFs are node-major: node n carries DOFs 3n, 3n+1, 3n+2. Matrix-level
/// models built with make_model() may use any scalar numbering.
struct SubdomainModel {
  int id = 0;
  SparseMatrix stiffness;
  Vector load;
  std::vector<Index> interface_dofs;  // sorted, unique
  std::vector<Index> dirichlet_dofs;  // sorted, unique
  std::shared_ptr<const StructuredMesh> mesh;  // null for matrix-level models

  Index num_dofs() const { return static_cast<Index>(load.size()); }
  std::vector<Index> interior_dofs() const;
  std::vector<Index> free_dofs() const;

  /// K restricted to the non-Dirichlet DOFs, in free_dofs() order.
  SparseMatrix reduced_stiffness() const;
  Vector reduced_load() const;
  /// Scatter a free-DOF vector to full length, zeros on Dirichlet DOFs.
  Vector expand(const Vector& reduced) const;
};

/// Isotropic linear-elastic trilinear hexahedron, 2x2x2 Gauss quadrature.
/// Throws std::invalid_argument on a non-positive Jacobian at any Gauss point.
ElementMatrix element_stiffness(const std::array<Point3, 8>& coords, double young, double poisson);

/// Sum of Jacobian determinants times Gauss weights.
double element_volume(const std::array<Point3, 8>& coords);

SubdomainModel assemble(const StructuredMesh& mesh, const MaterialField& materials, const Point3& body_load);

/// Matrix-level model, no mesh attached.
SubdomainModel make_model(SparseMatrix stiffness, Vector load, std::vector<Index> interface_dofs,
                          std::vector<Index> dirichlet_dofs = {}, int id = 0);

/// Record zero-displacement DOFs. Rejects indices out of range or already on the interface.
SubdomainModel apply_dirichlet(SubdomainModel model, const std::vector<Index>& clamped_dofs);

/// Set the interface DOF list. Rejects indices out of range or overlapping Dirichlet DOFs.
SubdomainModel with_interface(SubdomainModel model, std::vector<Index> interface_dofs);

/// Solve the Dirichlet-reduced system K_ff u_f = f_f; empty when every DOF is clamped.
Vector solve_reduced(const SubdomainModel& model);

/// Sorted union of a and b.
std::vector<Index> merge_sorted(const std::vector<Index>& a, const std::vector<Index>& b);

/// Submatrix K(rows, cols).
SparseMatrix extract_block(const SparseMatrix& k, const std::vector<Index>& rows, const std::vector<Index>& cols);
Vector gather(const Vector& v, const std::vector<Index>& idx);

}  // namespace glc
