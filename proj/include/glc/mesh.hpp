#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace glc {

using Point3 = std::array<double, 3>;
using Index = std::int64_t;

/// Cube faces, named by outward normal.
enum class Face : int { XMinus = 0, XPlus, YMinus, YPlus, ZMinus, ZPlus };

inline constexpr std::array<Face, 6> kAllFaces = {Face::XMinus, Face::XPlus, Face::YMinus,
                                                  Face::YPlus,  Face::ZMinus, Face::ZPlus};

int face_axis(Face f);
bool face_is_plus(Face f);
Face face_from_string(const std::string& s);  // "-x", "+x", ...
std::string to_string(Face f);

/// Structured hexahedral mesh of an axis-aligned cube.
///
/// Nodes are numbered lexicographically with x fastest, then y, then z.
/// Element local node order is the usual right-handed one:
/// (0,0,0) (1,0,0) (1,1,0) (0,1,0) (0,0,1) (1,0,1) (1,1,1) (0,1,1).
struct StructuredMesh {
  int elems_per_edge = 0;
  Point3 origin{0.0, 0.0, 0.0};
  double edge_length = 0.0;
  std::vector<Point3> node_coords;
  std::vector<std::array<Index, 8>> hex_connectivity;

  Index num_nodes() const { return static_cast<Index>(node_coords.size()); }
  Index num_elements() const { return static_cast<Index>(hex_connectivity.size()); }
  Index num_dofs() const { return 3 * num_nodes(); }
  int nodes_per_edge() const { return elems_per_edge + 1; }
  Index node_index(int i, int j, int k) const;
  Point3 element_centroid(Index e) const;
  std::array<Point3, 8> element_coords(Index e) const;
};

struct MaterialField {
  std::vector<double> young;    // per element
  std::vector<double> poisson;  // per element
  double inclusion_radius_fraction = 0.0;

  Index count_below(double e_threshold) const;
};

/// Sorted, duplicate-free scalar DOF list of nodes on a set of cube faces.
struct InterfaceSelector {
  std::vector<Face> faces;
  std::vector<Index> dofs;

  std::vector<Index> nodes() const;
};

StructuredMesh build_cube_mesh(int elems_per_edge, const Point3& origin, double edge_length);

/// Element gets `e_matrix / e_ratio` iff its centroid lies inside the sphere of
/// radius `radius_fraction * edge_length / 2` centered on the cube.
MaterialField assign_inclusion(const StructuredMesh& mesh, double e_matrix, double e_ratio, double nu,
                               double radius_fraction);

InterfaceSelector extract_interface(const StructuredMesh& mesh, const std::vector<Face>& faces);

/// Nodes lying on the given face (sorted).
std::vector<Index> face_nodes(const StructuredMesh& mesh, Face face);

/// One line per node ("v x y z") then one per element ("h n0 ... n7"), for inspection.
void dump_mesh(const StructuredMesh& mesh, std::ostream& os);

}  // namespace glc
