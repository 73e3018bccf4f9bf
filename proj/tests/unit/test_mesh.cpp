#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "glc/fem.hpp"
#include "glc/mesh.hpp"
#include "oracles.hpp"

using namespace glc;

TEST_CASE("single element cube") {
  const auto m = build_cube_mesh(1, {0, 0, 0}, 1.0);
  CHECK(m.num_nodes() == 8);
  CHECK(m.num_elements() == 1);
  CHECK(m.num_dofs() == 24);
}

TEST_CASE("node and element counts") {
  const auto m = build_cube_mesh(5, {1, 2, 3}, 2.0);
  CHECK(m.num_nodes() == 216);
  CHECK(m.num_elements() == 125);
  for (const auto& hex : m.hex_connectivity) {
    for (Index n : hex) {
      CHECK(n >= 0);
      CHECK(n < m.num_nodes());
    }
  }
}

TEST_CASE("lexicographic numbering, x fastest") {
  const auto m = build_cube_mesh(3, {0.5, -1, 2}, 3.0);
  CHECK(m.node_index(1, 0, 0) == 1);
  CHECK(m.node_index(0, 1, 0) == 4);
  CHECK(m.node_index(0, 0, 1) == 16);
  const auto& p = m.node_coords[m.node_index(3, 3, 3)];
  CHECK(p[0] == 3.5);
  CHECK(p[1] == 2.0);
  CHECK(p[2] == 5.0);
}

TEST_CASE("element volumes sum to the cube volume and are positive") {
  for (int n : {1, 3, 6}) {
    const double L = 1.7;
    const auto m = build_cube_mesh(n, {0.3, 0.1, -2}, L);
    double total = 0.0;
    for (Index e = 0; e < m.num_elements(); ++e) {
      const double v = element_volume(m.element_coords(e));
      CHECK(v > 0.0);
      total += v;
    }
    CHECK(std::abs(total - L * L * L) <= 1e-12 * L * L * L);
  }
}

TEST_CASE("mesh rejects bad sizes") {
  CHECK_THROWS_AS(build_cube_mesh(0, {0, 0, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_cube_mesh(-2, {0, 0, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_cube_mesh(2, {0, 0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("mesh generation is deterministic") {
  const auto a = build_cube_mesh(4, {0.1, 0.2, 0.3}, 0.7);
  const auto b = build_cube_mesh(4, {0.1, 0.2, 0.3}, 0.7);
  CHECK(a.node_coords == b.node_coords);
  CHECK(a.hex_connectivity == b.hex_connectivity);
}

TEST_CASE("inclusion assignment") {
  const auto m = build_cube_mesh(4, {0, 0, 0}, 1.0);

  SUBCASE("zero radius is homogeneous") {
    const auto f = assign_inclusion(m, 3.0, 10.0, 0.3, 0.0);
    CHECK(std::all_of(f.young.begin(), f.young.end(), [](double e) { return e == 3.0; }));
    CHECK(f.count_below(3.0) == 0);
  }
  SUBCASE("inclusion is ten times softer, nu constant") {
    const auto f = assign_inclusion(m, 1.0, 10.0, 0.3, 0.5);
    for (double e : f.young) CHECK((e == 1.0 || e == doctest::Approx(0.1).epsilon(1e-15)));
    for (double nu : f.poisson) CHECK(nu == 0.3);
    CHECK(f.count_below(1.0) > 0);
  }
  SUBCASE("count matches brute-force centroid enumeration") {
    const auto f = assign_inclusion(m, 1.0, 10.0, 0.3, 0.5);
    CHECK(f.count_below(1.0) == oracle::inclusion_count(m, 0.5));
    for (int n : {3, 5, 8}) {
      for (double rf : {0.2, 0.6, 0.9}) {
        const auto mm = build_cube_mesh(n, {1, 0, 2}, 2.0);
        CHECK(assign_inclusion(mm, 1.0, 10.0, 0.3, rf).count_below(1.0) == oracle::inclusion_count(mm, rf));
      }
    }
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS(assign_inclusion(m, 1.0, 10.0, 0.3, 1.0));
    CHECK_THROWS(assign_inclusion(m, 1.0, 10.0, 0.3, -0.1));
    CHECK_THROWS(assign_inclusion(m, 1.0, 0.0, 0.3, 0.5));
    CHECK_THROWS(assign_inclusion(m, 0.0, 10.0, 0.3, 0.5));
    CHECK_THROWS(assign_inclusion(m, 1.0, 10.0, 0.5, 0.5));
  }
}

TEST_CASE("inclusion is invariant under axis permutation") {
  const int n = 6;
  const auto m = build_cube_mesh(n, {0, 0, 0}, 1.0);
  const auto f = assign_inclusion(m, 1.0, 10.0, 0.3, 0.7);
  auto elem = [n](int i, int j, int k) { return static_cast<std::size_t>(i + n * (j + n * k)); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double e = f.young[elem(i, j, k)];
        CHECK(f.young[elem(j, k, i)] == e);
        CHECK(f.young[elem(k, i, j)] == e);
        CHECK(f.young[elem(j, i, k)] == e);
      }
    }
  }
}

TEST_CASE("interface extraction") {
  SUBCASE("one face of a unit hex") {
    const auto m = build_cube_mesh(1, {0, 0, 0}, 1.0);
    const auto s = extract_interface(m, {Face::XPlus});
    CHECK(s.nodes().size() == 4);
    CHECK(s.dofs.size() == 12);
  }
  SUBCASE("two adjacent faces share an edge") {
    const auto m = build_cube_mesh(2, {0, 0, 0}, 1.0);
    const auto s = extract_interface(m, {Face::XMinus, Face::YPlus});
    const auto expected = oracle::nodes_on_planes(m, {{0, 0.0}, {1, 1.0}});
    CHECK(expected.size() == 15);
    const auto nodes = s.nodes();
    CHECK(std::set<Index>(nodes.begin(), nodes.end()) == expected);
    CHECK(s.dofs.size() == 45);
  }
  SUBCASE("all six faces") {
    const auto m = build_cube_mesh(2, {0, 0, 0}, 1.0);
    std::vector<Face> all(kAllFaces.begin(), kAllFaces.end());
    CHECK(extract_interface(m, all).nodes().size() == 26);
  }
  SUBCASE("sorted, unique, geometrically on the selected faces") {
    const double L = 2.5;
    const auto m = build_cube_mesh(5, {1, -1, 0.5}, L);
    const std::vector<Face> faces{Face::ZMinus, Face::XPlus, Face::YMinus};
    const auto s = extract_interface(m, faces);
    CHECK(std::is_sorted(s.dofs.begin(), s.dofs.end()));
    CHECK(std::adjacent_find(s.dofs.begin(), s.dofs.end()) == s.dofs.end());
    for (Index n : s.nodes()) {
      bool on = false;
      for (Face f : faces) {
        const int a = face_axis(f);
        const double plane = m.origin[a] + (face_is_plus(f) ? L : 0.0);
        on = on || std::abs(m.node_coords[n][a] - plane) <= 1e-12 * L;
      }
      CHECK(on);
    }
  }
  SUBCASE("empty selector is rejected") {
    const auto m = build_cube_mesh(2, {0, 0, 0}, 1.0);
    CHECK_THROWS_AS(extract_interface(m, {}), std::invalid_argument);
  }
}

TEST_CASE("adjacent cubes select coincident interface nodes") {
  const double L = 1.3;
  const auto a = build_cube_mesh(4, {0, 0, 0}, L);
  const auto b = build_cube_mesh(4, {L, 0, 0}, L);
  const auto na = face_nodes(a, Face::XPlus);
  const auto nb = face_nodes(b, Face::XMinus);
  REQUIRE(na.size() == nb.size());
  for (std::size_t i = 0; i < na.size(); ++i) {
    for (int d = 0; d < 3; ++d) CHECK(std::abs(a.node_coords[na[i]][d] - b.node_coords[nb[i]][d]) <= 1e-12 * L);
  }
}

TEST_CASE("face names round trip") {
  for (Face f : kAllFaces) CHECK(face_from_string(to_string(f)) == f);
  CHECK_THROWS(face_from_string("x"));
}

TEST_CASE("mesh dump lists nodes then elements") {
  const auto m = build_cube_mesh(1, {0, 0, 0}, 1.0);
  std::ostringstream os;
  dump_mesh(m, os);
  std::istringstream is(os.str());
  std::string line;
  int v = 0, h = 0;
  while (std::getline(is, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("h ", 0) == 0) ++h;
  }
  CHECK(v == 8);
  CHECK(h == 1);
}
