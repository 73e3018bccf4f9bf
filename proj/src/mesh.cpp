#include "glc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace glc {

int face_axis(Face f) { return static_cast<int>(f) / 2; }

bool face_is_plus(Face f) { return static_cast<int>(f) % 2 == 1; }

Face face_from_string(const std::string& s) {
  static const char* names[] = {"-x", "+x", "-y", "+y", "-z", "+z"};
  for (int i = 0; i < 6; ++i) {
    if (s == names[i]) return static_cast<Face>(i);
  }
  throw std::invalid_argument("unknown face '" + s + "' (expected one of -x +x -y +y -z +z)");
}

std::string to_string(Face f) {
  static const char* names[] = {"-x", "+x", "-y", "+y", "-z", "+z"};
  return names[static_cast<int>(f)];
}

Index StructuredMesh::node_index(int i, int j, int k) const {
  const Index n = nodes_per_edge();
  return i + n * (j + n * static_cast<Index>(k));
}

Point3 StructuredMesh::element_centroid(Index e) const {
  Point3 c{0.0, 0.0, 0.0};
  for (Index n : hex_connectivity[e]) {
    for (int d = 0; d < 3; ++d) c[d] += node_coords[n][d];
  }
  for (double& x : c) x /= 8.0;
  return c;
}

std::array<Point3, 8> StructuredMesh::element_coords(Index e) const {
  std::array<Point3, 8> xs;
  for (int a = 0; a < 8; ++a) xs[a] = node_coords[hex_connectivity[e][a]];
  return xs;
}

Index MaterialField::count_below(double e_threshold) const {
  return std::count_if(young.begin(), young.end(), [&](double e) { return e < e_threshold; });
}

std::vector<Index> InterfaceSelector::nodes() const {
  std::vector<Index> out;
  for (Index d : dofs) {
    if (d % 3 == 0) out.push_back(d / 3);
  }
  return out;
}

StructuredMesh build_cube_mesh(int elems_per_edge, const Point3& origin, double edge_length) {
  if (elems_per_edge < 1) throw std::invalid_argument("build_cube_mesh: elems_per_edge must be >= 1");
  if (!(edge_length > 0.0)) throw std::invalid_argument("build_cube_mesh: edge_length must be > 0");

  StructuredMesh m;
  m.elems_per_edge = elems_per_edge;
  m.origin = origin;
  m.edge_length = edge_length;

  const int n = elems_per_edge + 1;
  const double h = edge_length / elems_per_edge;
  m.node_coords.reserve(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        // Pin the last layer to the exact far face so neighbouring cubes agree bit-for-bit.
        auto coord = [&](int idx, int d) {
          return idx == elems_per_edge ? origin[d] + edge_length : origin[d] + idx * h;
        };
        m.node_coords.push_back({coord(i, 0), coord(j, 1), coord(k, 2)});
      }
    }
  }

  m.hex_connectivity.reserve(static_cast<std::size_t>(elems_per_edge) * elems_per_edge * elems_per_edge);
  for (int k = 0; k < elems_per_edge; ++k) {
    for (int j = 0; j < elems_per_edge; ++j) {
      for (int i = 0; i < elems_per_edge; ++i) {
        m.hex_connectivity.push_back({m.node_index(i, j, k), m.node_index(i + 1, j, k),
                                      m.node_index(i + 1, j + 1, k), m.node_index(i, j + 1, k),
                                      m.node_index(i, j, k + 1), m.node_index(i + 1, j, k + 1),
                                      m.node_index(i + 1, j + 1, k + 1), m.node_index(i, j + 1, k + 1)});
      }
    }
  }
  return m;
}

MaterialField assign_inclusion(const StructuredMesh& mesh, double e_matrix, double e_ratio, double nu,
                               double radius_fraction) {
  if (!(e_matrix > 0.0)) throw std::invalid_argument("assign_inclusion: E_matrix must be > 0");
  if (!(e_ratio > 0.0)) throw std::invalid_argument("assign_inclusion: E_ratio must be > 0");
  if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("assign_inclusion: nu must be in [0, 0.5)");
  if (!(radius_fraction >= 0.0 && radius_fraction < 1.0)) {
    throw std::invalid_argument("assign_inclusion: radius_fraction must be in [0, 1)");
  }

  MaterialField f;
  f.inclusion_radius_fraction = radius_fraction;
  f.young.assign(mesh.num_elements(), e_matrix);
  f.poisson.assign(mesh.num_elements(), nu);

  const double radius = radius_fraction * mesh.edge_length / 2.0;
  Point3 center;
  for (int d = 0; d < 3; ++d) center[d] = mesh.origin[d] + mesh.edge_length / 2.0;

  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Point3 c = mesh.element_centroid(e);
    double r2 = 0.0;
    for (int d = 0; d < 3; ++d) r2 += (c[d] - center[d]) * (c[d] - center[d]);
    if (r2 <= radius * radius && radius > 0.0) f.young[e] = e_matrix / e_ratio;
  }
  return f;
}

std::vector<Index> face_nodes(const StructuredMesh& mesh, Face face) {
  const int n = mesh.nodes_per_edge();
  const int axis = face_axis(face);
  const int fixed = face_is_plus(face) ? n - 1 : 0;
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int idx[3] = {i, j, k};
        if (idx[axis] == fixed) out.push_back(mesh.node_index(i, j, k));
      }
    }
  }
  return out;
}

InterfaceSelector extract_interface(const StructuredMesh& mesh, const std::vector<Face>& faces) {
  if (faces.empty()) throw std::invalid_argument("extract_interface: empty face selector");
  InterfaceSelector sel;
  sel.faces = faces;
  for (Face f : faces) {
    for (Index node : face_nodes(mesh, f)) {
      for (int c = 0; c < 3; ++c) sel.dofs.push_back(3 * node + c);
    }
  }
  std::sort(sel.dofs.begin(), sel.dofs.end());
  sel.dofs.erase(std::unique(sel.dofs.begin(), sel.dofs.end()), sel.dofs.end());
  return sel;
}

void dump_mesh(const StructuredMesh& mesh, std::ostream& os) {
  for (const Point3& p : mesh.node_coords) os << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  for (const auto& h : mesh.hex_connectivity) {
    os << 'h';
    for (Index n : h) os << ' ' << n;
    os << '\n';
  }
}

}  // namespace glc
