#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "g1s/error.hpp"
#include "g1s/mesh.hpp"

using namespace g1s;

namespace {

const std::string kData = G1S_DATA_DIR;

QuadMesh load(const std::string& name) { return load_mesh(kData + "/" + name + ".qmesh.json"); }

std::string code_of(const std::string& json_text) {
  try {
    parse_mesh(json_text);
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

std::string faces_json(const std::string& faces, int nverts) {
  std::string v = "[";
  for (int i = 0; i < nverts; ++i) v += (i ? "," : "") + std::string("{\"id\":") + std::to_string(i) + "}";
  return "{\"vertices\":" + v + "],\"faces\":" + faces + "}";
}

// Euler characteristic from independently counted undirected edges.
int euler(const QuadMesh& m) {
  std::set<std::pair<int, int>> edges;
  for (const auto& f : m.faces) {
    for (int i = 0; i < 4; ++i) {
      const int a = f.v[i], b = f.v[(i + 1) % 4];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return m.num_vertices() - static_cast<int>(edges.size()) + m.num_faces();
}

}  // namespace

TEST_CASE("cell counts of the bundled meshes") {
  struct Expect {
    const char* name;
    int f2, f1, f0, interior_edges;
    bool closed;
  };
  for (const Expect& e : {Expect{"fan3", 3, 9, 7, 3, false}, Expect{"quad", 1, 4, 4, 0, false},
                          Expect{"cube", 6, 12, 8, 12, true}, Expect{"grid3x3", 9, 24, 16, 12, false},
                          Expect{"fan5", 5, 15, 11, 5, false}}) {
    CAPTURE(e.name);
    const QuadMesh m = load(e.name);
    CHECK(m.num_faces() == e.f2);
    CHECK(m.num_edges() == e.f1);
    CHECK(m.num_vertices() == e.f0);
    CHECK(m.num_interior_edges() == e.interior_edges);
    CHECK(m.closed() == e.closed);
    CHECK(m.num_vertices() - m.num_edges() + m.num_faces() == euler(m));
  }
  CHECK(euler(load("cube")) == 2);
}

TEST_CASE("stars walk every face around a vertex") {
  const QuadMesh m = load("fan3");
  const VertexStar& s = m.stars[m.vertex_index(0)];
  CHECK(s.interior);
  CHECK(s.faces.size() == 3);
  CHECK(s.edges.size() == 3);
  const QuadMesh cube = load("cube");
  for (const auto& st : cube.stars) {
    CHECK(st.interior);
    CHECK(st.faces.size() == 3);
  }
  const VertexStar& b = m.stars[m.vertex_index(4)];
  CHECK_FALSE(b.interior);
  CHECK(b.faces.size() == 1);
  CHECK(b.edges.size() == 2);
}

TEST_CASE("invalid topology is rejected with a typed error") {
  CHECK(code_of(faces_json("[[0,1,2]]", 3)) == "TopologyError");
  CHECK(code_of(faces_json("[[0,1,1,2]]", 3)) == "TopologyError");
  CHECK(code_of(faces_json("[]", 4)) == "TopologyError");
  // Two faces traversing the shared edge in the same direction.
  CHECK(code_of(faces_json("[[0,1,2,3],[0,1,4,5]]", 6)) == "TopologyError");
  // Three faces on one edge.
  CHECK(code_of(faces_json("[[0,1,2,3],[1,0,4,5],[0,1,6,7]]", 8)) == "TopologyError");
  // Two fans sharing only their centre vertex.
  CHECK(code_of(faces_json("[[0,1,2,3],[0,4,5,6]]", 7)) == "TopologyError");
  CHECK(code_of(faces_json("[[0,1,2,9]]", 4)) == "UnknownVertex");
  CHECK(code_of("{\"vertices\":[{\"id\":0},{\"id\":0}],\"faces\":[[0,0,0,0]]}") == "TopologyError");
  CHECK(code_of("not json") == "ParseError");
  CHECK_THROWS_AS(load("missing"), Error);
}

TEST_CASE("symmetric gluing on the corner example") {
  const QuadMesh m = load("fan3");
  const int e = m.edge_between(m.vertex_index(0), m.vertex_index(1));
  REQUIRE(e >= 0);
  REQUIRE(m.edges[e].gluing.has_value());
  const GluingTriple& g = *m.edges[e].gluing;
  // a = -1 + 4u^2 on [0, 1/2] and 0 on [1/2, 1]; b = -1; c = 1.
  CHECK(g.a.left() == Poly({Rational(-1), Rational(0), Rational(4)}));
  CHECK(g.a.right().is_zero());
  CHECK(g.b == UniSpline::constant(-1, 2));
  CHECK(g.c == UniSpline::constant(1, 2));
  CHECK(g.regularity() == 0);
  CHECK(check_vertex_cycle(m, m.vertex_index(0)).ok);
  CHECK_FALSE(is_crossing_vertex(m, m.vertex_index(0)));
  CHECK_THROWS_AS(check_vertex_cycle(m, m.vertex_index(4)), Error);
}

TEST_CASE("transition cycles close on every interior vertex") {
  for (const char* name : {"cube", "grid3x3", "fan5"}) {
    CAPTURE(name);
    const QuadMesh m = load(name);
    for (int v = 0; v < m.num_vertices(); ++v) {
      if (!m.stars[v].interior) continue;
      const CycleCheck c = check_vertex_cycle(m, v);
      CHECK(c.ok);
      CHECK(c.product[0][0] == 1);
      CHECK(c.product[0][1] == 0);
      CHECK(c.product[1][0] == 0);
      CHECK(c.product[1][1] == 1);
    }
  }
}

TEST_CASE("crossing vertices of the regular grid") {
  const QuadMesh m = load("grid3x3");
  const Classification c = classify(m);
  int interior = 0;
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (!m.stars[v].interior) continue;
    ++interior;
    CHECK(c.vertex_crossing[v] == 1);
    CHECK(check_crossing_conditions(m, v));
  }
  CHECK(interior == 4);
  CHECK(c.total_crossing_vertices == 4);
  CHECK(classify(load("cube")).total_crossing_vertices == 0);
}

TEST_CASE("valence five has no rational symmetric gluing") {
  QuadMesh m = load("fan5");
  CHECK_THROWS_AS(assign_gluing(m, GluingMode::Symmetric, 2, 0), Error);
  try {
    assign_gluing(m, GluingMode::Symmetric, 2, 0);
  } catch (const Error& e) {
    CHECK(e.code() == "IrrationalGluing");
  }
}

TEST_CASE("mesh JSON round trip preserves the hash") {
  for (const char* name : {"fan3", "cube", "grid3x3", "fan5", "quad"}) {
    CAPTURE(name);
    const QuadMesh m = load(name);
    const QuadMesh back = parse_mesh(mesh_to_json(m));
    CHECK(back.hash() == m.hash());
    CHECK(back.num_edges() == m.num_edges());
    for (int e = 0; e < m.num_edges(); ++e) {
      CHECK(back.edge_from_key(m.edge_key(e)) == e);
      if (m.edges[e].gluing) {
        CHECK(back.edges[e].gluing->a == m.edges[e].gluing->a);
        CHECK(back.edges[e].gluing->b == m.edges[e].gluing->b);
        CHECK(back.edges[e].gluing->c == m.edges[e].gluing->c);
      }
    }
  }
  CHECK(load("fan3").hash() != load("cube").hash());
}
