// Independent reference computations used by the unit and acceptance tests.
// Everything here is dense and deliberately naive.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "glc/coupling.hpp"
#include "glc/fem.hpp"
#include "glc/mesh.hpp"

namespace oracle {

using glc::DenseMatrix;
using glc::Index;
using glc::Vector;

inline DenseMatrix take(const DenseMatrix& k, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  DenseMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = k(rows[i], cols[j]);
  }
  return out;
}

inline Vector take(const Vector& v, const std::vector<Index>& idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

inline std::vector<Index> complement(Index n, const std::vector<Index>& a, const std::vector<Index>& b) {
  std::set<Index> used(a.begin(), a.end());
  used.insert(b.begin(), b.end());
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i) {
    if (!used.count(i)) out.push_back(i);
  }
  return out;
}

struct DenseSchur {
  DenseMatrix s;
  Vector b;
  DenseMatrix kii_inv_kib;
  Vector kii_inv_fi;
  std::vector<Index> interior;
};

// Explicit block elimination with a full-pivot LU of K_ii.
inline DenseSchur block_schur(const DenseMatrix& k, const Vector& f, const std::vector<Index>& boundary,
                              const std::vector<Index>& dirichlet = {}) {
  DenseSchur out;
  out.interior = complement(k.rows(), boundary, dirichlet);
  const DenseMatrix kbb = take(k, boundary, boundary);
  const Vector fb = take(f, boundary);
  if (out.interior.empty()) {
    out.s = kbb;
    out.b = fb;
    out.kii_inv_kib = DenseMatrix(0, boundary.size());
    out.kii_inv_fi = Vector(0);
    return out;
  }
  const DenseMatrix kii = take(k, out.interior, out.interior);
  const DenseMatrix kib = take(k, out.interior, boundary);
  const DenseMatrix kbi = take(k, boundary, out.interior);
  Eigen::FullPivLU<DenseMatrix> lu(kii);
  out.kii_inv_kib = lu.solve(kib);
  out.kii_inv_fi = lu.solve(take(f, out.interior));
  out.s = kbb - kbi * out.kii_inv_kib;
  out.b = fb - kbi * out.kii_inv_fi;
  return out;
}

// Random SPD matrix: B^T B + I/2 with a banded random B.
inline DenseMatrix random_spd(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix b = DenseMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 4); j <= std::min(n - 1, i + 4); ++j) b(i, j) = u(rng);
  }
  return b.transpose() * b + 0.5 * DenseMatrix::Identity(n, n);
}

inline glc::SparseMatrix to_sparse(const DenseMatrix& d) { return d.sparseView(); }

// Sorted unique sample of `count` indices from [0, n).
inline std::vector<Index> random_subset(Index n, Index count, std::mt19937_64& rng) {
  std::vector<Index> all(n);
  for (Index i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

// Inclusion count by testing every element centroid directly from node coordinates.
inline Index inclusion_count(const glc::StructuredMesh& mesh, double radius_fraction) {
  const double r = radius_fraction * mesh.edge_length / 2.0;
  Index count = 0;
  if (r <= 0.0) return 0;
  for (const auto& hex : mesh.hex_connectivity) {
    double c[3] = {0, 0, 0};
    for (Index n : hex) {
      for (int d = 0; d < 3; ++d) c[d] += mesh.node_coords[n][d] / 8.0;
    }
    double d2 = 0.0;
    for (int d = 0; d < 3; ++d) {
      const double x = c[d] - (mesh.origin[d] + mesh.edge_length / 2.0);
      d2 += x * x;
    }
    if (d2 <= r * r) ++count;
  }
  return count;
}

// Nodes whose coordinate lies on any of the planes (axis, value).
inline std::set<Index> nodes_on_planes(const glc::StructuredMesh& mesh, const std::vector<std::pair<int, double>>& planes) {
  std::set<Index> out;
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    for (const auto& [axis, value] : planes) {
      if (std::abs(mesh.node_coords[n][axis] - value) <= 1e-12 * mesh.edge_length) out.insert(n);
    }
  }
  return out;
}

inline double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// S^G, S^R, b^G, b^R assembled from dense block elimination of the raw subdomain matrices.
struct DenseOperators {
  DenseMatrix sg, sr;
  Vector bg, br;
};

inline DenseOperators dense_operators(const glc::CouplingProblem& pb) {
  const auto& sp = pb.space();
  const Index n = sp.size;
  DenseOperators d{DenseMatrix::Zero(n, n), DenseMatrix::Zero(n, n), Vector::Zero(n), Vector::Zero(n)};
  for (int k = 0; k < pb.num_subdomains(); ++k) {
    const auto& cm = pb.coarse(k).model();
    const auto c = block_schur(DenseMatrix(cm.stiffness), cm.load, cm.interface_dofs, cm.dirichlet_dofs);
    const auto& map = sp.assembly[k];
    DenseMatrix s_ref = c.s;
    Vector b_ref = c.b;
    if (sp.is_patch[k]) {
      const auto& fm = pb.fine(k).model();
      const auto f = block_schur(DenseMatrix(fm.stiffness), fm.load, fm.interface_dofs, fm.dirichlet_dofs);
      const DenseMatrix j(sp.interpolators[k]);
      s_ref = j.transpose() * f.s * j;
      b_ref = j.transpose() * f.b;
    }
    for (std::size_t a = 0; a < map.size(); ++a) {
      d.bg[map[a]] += c.b[a];
      d.br[map[a]] += b_ref[a];
      for (std::size_t b = 0; b < map.size(); ++b) {
        d.sg(map[a], map[b]) += c.s(a, b);
        d.sr(map[a], map[b]) += s_ref(a, b);
      }
    }
  }
  return d;
}

}  // namespace oracle
