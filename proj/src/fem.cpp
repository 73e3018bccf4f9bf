#include "glc/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "glc/error.hpp"

namespace glc {
namespace {

constexpr int kCorner[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                               {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

struct GaussPoint {
  double xi[3];
  double weight;
};

std::array<GaussPoint, 8> gauss_2x2x2() {
  const double g = 1.0 / std::sqrt(3.0);
  std::array<GaussPoint, 8> pts;
  for (int a = 0; a < 8; ++a) {
    pts[a] = {{kCorner[a][0] * g, kCorner[a][1] * g, kCorner[a][2] * g}, 1.0};
  }
  return pts;
}

void shape_values(const double xi[3], double n[8]) {
  for (int a = 0; a < 8; ++a) {
    n[a] = 0.125 * (1 + kCorner[a][0] * xi[0]) * (1 + kCorner[a][1] * xi[1]) * (1 + kCorner[a][2] * xi[2]);
  }
}

// dN/dxi, rows = reference direction, cols = node.
Eigen::Matrix<double, 3, 8> shape_gradients(const double xi[3]) {
  Eigen::Matrix<double, 3, 8> g;
  for (int a = 0; a < 8; ++a) {
    const double s0 = kCorner[a][0], s1 = kCorner[a][1], s2 = kCorner[a][2];
    g(0, a) = 0.125 * s0 * (1 + s1 * xi[1]) * (1 + s2 * xi[2]);
    g(1, a) = 0.125 * s1 * (1 + s0 * xi[0]) * (1 + s2 * xi[2]);
    g(2, a) = 0.125 * s2 * (1 + s0 * xi[0]) * (1 + s1 * xi[1]);
  }
  return g;
}

Eigen::Matrix3d jacobian(const Eigen::Matrix<double, 3, 8>& dn, const std::array<Point3, 8>& x) {
  Eigen::Matrix3d j = Eigen::Matrix3d::Zero();
  for (int a = 0; a < 8; ++a) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) j(r, c) += dn(r, a) * x[a][c];
    }
  }
  return j;
}

Eigen::Matrix<double, 6, 6> elasticity(double e, double nu) {
  const double lambda = e * nu / ((1 + nu) * (1 - 2 * nu));
  const double mu = e / (2 * (1 + nu));
  Eigen::Matrix<double, 6, 6> d = Eigen::Matrix<double, 6, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) d(i, j) = lambda;
    d(i, i) = lambda + 2 * mu;
    d(i + 3, i + 3) = mu;
  }
  return d;
}

}  // namespace

std::vector<Index> SubdomainModel::interior_dofs() const {
  const std::vector<Index> taken = merge_sorted(interface_dofs, dirichlet_dofs);
  std::vector<Index> out;
  out.reserve(num_dofs() - taken.size());
  auto it = taken.begin();
  for (Index d = 0; d < num_dofs(); ++d) {
    if (it != taken.end() && *it == d) {
      ++it;
      continue;
    }
    out.push_back(d);
  }
  return out;
}

std::vector<Index> SubdomainModel::free_dofs() const {
  std::vector<Index> out;
  out.reserve(num_dofs() - dirichlet_dofs.size());
  auto it = dirichlet_dofs.begin();
  for (Index d = 0; d < num_dofs(); ++d) {
    if (it != dirichlet_dofs.end() && *it == d) {
      ++it;
      continue;
    }
    out.push_back(d);
  }
  return out;
}

SparseMatrix SubdomainModel::reduced_stiffness() const {
  const auto f = free_dofs();
  return extract_block(stiffness, f, f);
}

Vector SubdomainModel::reduced_load() const { return gather(load, free_dofs()); }

Vector SubdomainModel::expand(const Vector& reduced) const {
  const auto f = free_dofs();
  if (reduced.size() != static_cast<Index>(f.size())) {
    throw std::invalid_argument("expand: reduced vector length mismatch");
  }
  Vector full = Vector::Zero(num_dofs());
  for (std::size_t k = 0; k < f.size(); ++k) full[f[k]] = reduced[k];
  return full;
}

ElementMatrix element_stiffness(const std::array<Point3, 8>& coords, double young, double poisson) {
  if (!(young > 0.0)) throw std::invalid_argument("element_stiffness: E must be > 0");
  if (!(poisson >= 0.0 && poisson < 0.5)) throw std::invalid_argument("element_stiffness: nu must be in [0, 0.5)");

  const auto d = elasticity(young, poisson);
  ElementMatrix k = ElementMatrix::Zero();
  for (const GaussPoint& gp : gauss_2x2x2()) {
    const auto dn = shape_gradients(gp.xi);
    const Eigen::Matrix3d j = jacobian(dn, coords);
    const double det = j.determinant();
    if (!(det > 0.0)) {
      throw std::invalid_argument("element_stiffness: non-positive Jacobian determinant " + std::to_string(det));
    }
    const Eigen::Matrix<double, 3, 8> dx = j.inverse() * dn;  // physical gradients

    Eigen::Matrix<double, 6, 24> b = Eigen::Matrix<double, 6, 24>::Zero();
    for (int a = 0; a < 8; ++a) {
      const int c = 3 * a;
      b(0, c) = dx(0, a);
      b(1, c + 1) = dx(1, a);
      b(2, c + 2) = dx(2, a);
      b(3, c + 1) = dx(2, a);
      b(3, c + 2) = dx(1, a);
      b(4, c) = dx(2, a);
      b(4, c + 2) = dx(0, a);
      b(5, c) = dx(1, a);
      b(5, c + 1) = dx(0, a);
    }
    k.noalias() += b.transpose() * d * b * (det * gp.weight);
  }
  // Quadrature sums are symmetric only up to rounding; make it exact.
  return 0.5 * (k + k.transpose());
}

double element_volume(const std::array<Point3, 8>& coords) {
  double v = 0.0;
  for (const GaussPoint& gp : gauss_2x2x2()) v += jacobian(shape_gradients(gp.xi), coords).determinant() * gp.weight;
  return v;
}

SubdomainModel assemble(const StructuredMesh& mesh, const MaterialField& materials, const Point3& body_load) {
  if (static_cast<Index>(materials.young.size()) != mesh.num_elements() ||
      static_cast<Index>(materials.poisson.size()) != mesh.num_elements()) {
    throw std::invalid_argument("assemble: material field size does not match element count");
  }
  const Index ndof = mesh.num_dofs();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.num_elements()) * 24 * 24);
  Vector f = Vector::Zero(ndof);

  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto xs = mesh.element_coords(e);
    const ElementMatrix ke = element_stiffness(xs, materials.young[e], materials.poisson[e]);
    const auto& conn = mesh.hex_connectivity[e];
    for (int a = 0; a < 8; ++a) {
      for (int ca = 0; ca < 3; ++ca) {
        for (int b = 0; b < 8; ++b) {
          for (int cb = 0; cb < 3; ++cb) {
            trips.emplace_back(3 * conn[a] + ca, 3 * conn[b] + cb, ke(3 * a + ca, 3 * b + cb));
          }
        }
      }
    }
    // Consistent load: f_a = sum_gp N_a * body * detJ * w
    for (const GaussPoint& gp : gauss_2x2x2()) {
      double n[8];
      shape_values(gp.xi, n);
      const double det = jacobian(shape_gradients(gp.xi), xs).determinant();
      for (int a = 0; a < 8; ++a) {
        for (int c = 0; c < 3; ++c) f[3 * conn[a] + c] += n[a] * body_load[c] * det * gp.weight;
      }
    }
  }

  SubdomainModel m;
  m.stiffness.resize(ndof, ndof);
  m.stiffness.setFromTriplets(trips.begin(), trips.end());
  m.load = std::move(f);
  m.mesh = std::make_shared<const StructuredMesh>(mesh);
  return m;
}

SubdomainModel make_model(SparseMatrix stiffness, Vector load, std::vector<Index> interface_dofs,
                          std::vector<Index> dirichlet_dofs, int id) {
  if (stiffness.rows() != stiffness.cols() || stiffness.rows() != load.size()) {
    throw std::invalid_argument("make_model: stiffness/load dimension mismatch");
  }
  SubdomainModel m;
  m.id = id;
  m.stiffness = std::move(stiffness);
  m.load = std::move(load);
  m = apply_dirichlet(std::move(m), dirichlet_dofs);
  return with_interface(std::move(m), std::move(interface_dofs));
}

namespace {

std::vector<Index> sorted_unique_checked(std::vector<Index> v, Index n, const char* what) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (!v.empty() && (v.front() < 0 || v.back() >= n)) {
    throw std::invalid_argument(std::string(what) + ": DOF index out of range");
  }
  return v;
}

bool intersects(const std::vector<Index>& a, const std::vector<Index>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i;
    else ++j;
  }
  return false;
}

}  // namespace

SubdomainModel apply_dirichlet(SubdomainModel model, const std::vector<Index>& clamped_dofs) {
  auto clamped = sorted_unique_checked(clamped_dofs, model.num_dofs(), "apply_dirichlet");
  if (intersects(clamped, model.interface_dofs)) {
    throw std::invalid_argument("apply_dirichlet: clamped DOFs overlap the coupling interface");
  }
  model.dirichlet_dofs = merge_sorted(model.dirichlet_dofs, clamped);
  return model;
}

SubdomainModel with_interface(SubdomainModel model, std::vector<Index> interface_dofs) {
  auto iface = sorted_unique_checked(std::move(interface_dofs), model.num_dofs(), "with_interface");
  if (intersects(iface, model.dirichlet_dofs)) {
    throw std::invalid_argument("with_interface: interface DOFs overlap Dirichlet DOFs");
  }
  model.interface_dofs = std::move(iface);
  return model;
}

Vector solve_reduced(const SubdomainModel& model) {
  const SparseMatrix k = model.reduced_stiffness();
  if (k.rows() == 0) return Vector();
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(k);
  if (ldlt.info() != Eigen::Success) {
    throw SingularMatrixError("solve_reduced: factorization failed for subdomain " + std::to_string(model.id));
  }
  return ldlt.solve(model.reduced_load());
}

std::vector<Index> merge_sorted(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SparseMatrix extract_block(const SparseMatrix& k, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  std::vector<Index> row_pos(k.rows(), -1);
  for (std::size_t r = 0; r < rows.size(); ++r) row_pos[rows[r]] = static_cast<Index>(r);
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (SparseMatrix::InnerIterator it(k, cols[c]); it; ++it) {
      const Index r = row_pos[it.row()];
      if (r >= 0) trips.emplace_back(r, static_cast<Index>(c), it.value());
    }
  }
  SparseMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Vector gather(const Vector& v, const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = v[idx[k]];
  return out;
}

}  // namespace glc
