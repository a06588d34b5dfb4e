#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "g1s/syzygy.hpp"

namespace g1s {

enum class GluingMode { Symmetric, Fan, ConstantDenominator, Explicit };

GluingMode parse_gluing_mode(const std::string& name);
std::string gluing_mode_name(GluingMode mode);

struct Vertex {
  int id = 0;
  std::optional<std::array<double, 3>> position;
};

// Corners in order c0..c3 sit at (0,0), (1,0), (1,1), (0,1) of the face's
// native (s, t) parameter square.
struct Face {
  std::array<int, 4> v{};  // vertex indices
};

// Affine reindexing of a face grid: the frame origin is corner `corner`, the
// frame u axis points toward corner+1 when u_forward, else toward corner-1,
// and the v axis toward the remaining neighbour of the corner.
struct CornerFrame {
  int face = -1;
  int corner = 0;
  bool u_forward = true;

  // Native grid indices (i along s, j along t) of frame indices (i, j).
  std::pair<int, int> to_native(int i, int j, int m) const;
};

struct Edge {
  int v0 = -1, v1 = -1;    // vertex indices, id(v0) < id(v1)
  std::vector<int> faces;  // faces[0] = sigma_1 (lower face index), faces[1] = sigma_0
  std::optional<GluingTriple> gluing;

  bool interior() const { return faces.size() == 2; }
  int sigma1() const { return faces[0]; }
  int sigma0() const { return faces[1]; }
};

// Faces and edges around a vertex in walk order: faces[i] has edges[i] as its
// v axis and edges[i+1] as its u axis (native orientation frame at the vertex).
// Interior stars have F edges (indices taken cyclically), boundary stars F+1.
struct VertexStar {
  int vertex = -1;
  bool interior = false;
  std::vector<int> faces;
  std::vector<int> edges;
  std::vector<int> corners;  // corner index of the vertex in each face
};

struct GluingSettings {
  GluingMode mode = GluingMode::Symmetric;
  int degree = 2;      // l
  int regularity = 0;  // s
};

// Fan vectors (one per star edge, walk order) supplied per vertex index.
using FanVectors = std::vector<std::array<Rational, 2>>;

class QuadMesh {
 public:
  std::vector<Vertex> vertices;
  std::vector<Face> faces;
  std::vector<Edge> edges;
  std::vector<VertexStar> stars;
  GluingSettings gluing;
  // Triples read from an explicit-mode mesh file, keyed by edge index.
  std::map<int, GluingTriple> explicit_triples;

  // Builds adjacency and stars; raises TopologyError on invalid input.
  static QuadMesh build(std::vector<Vertex> vertices, std::vector<std::array<int, 4>> faces_by_id);

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_interior_edges() const;
  bool closed() const;

  int vertex_index(int id) const;
  // Index of the edge joining two vertex indices, or -1.
  int edge_between(int va, int vb) const;
  std::string edge_key(int e) const;
  int edge_from_key(const std::string& key) const;
  int corner_of(int face, int vertex) const;

  // Stored frames of an interior edge at v0 (u = 0 at v0).
  CornerFrame sigma1_frame(int e) const;
  CornerFrame sigma0_frame(int e) const;
  // Native-orientation frame of a face at one of its corners.
  CornerFrame vertex_frame(int face, int vertex) const;

  // True when the stored sigma_1 of edge e has e as its u axis in the
  // native-orientation frame at vertex (i.e. the stored roles match the star's).
  bool stored_roles_match(int e, int vertex) const;

  std::string canonical_string() const;
  std::string hash() const;

 private:
  std::map<int, int> id_to_index_;
  std::map<std::pair<int, int>, int> edge_lookup_;
};

QuadMesh load_mesh(const std::string& path);
QuadMesh parse_mesh(const std::string& json_text);
std::string mesh_to_json(const QuadMesh& mesh);

// Local transition data at an edge end, as the triple (A, B, C) with
// a = A / C and b = B / C in the native-orientation frames of the vertex.
struct LocalTriple {
  Rational A, B, C;
};
LocalTriple invert(const LocalTriple& t);

// Default fan of a vertex star (regular by valence, rational).
FanVectors default_fan(const QuadMesh& mesh, int vertex);

// Assigns gluing data on every interior edge. Fans may override defaults.
void assign_gluing(QuadMesh& mesh, GluingMode mode, int l, int s,
                   const std::map<int, FanVectors>& fans = {});
// Explicit per-edge triples keyed by edge index.
void assign_explicit_gluing(QuadMesh& mesh, const std::map<int, GluingTriple>& triples);

// Local gluing functions (a(t), b(t), c(t)) near `vertex` along edge e, in the
// star frames of that vertex; t = 0 at the vertex.
std::array<Poly, 3> local_gluing(const QuadMesh& mesh, int e, int vertex);

struct CycleCheck {
  bool ok = false;
  std::array<std::array<Rational, 2>, 2> product;
};
CycleCheck check_vertex_cycle(const QuadMesh& mesh, int vertex);
bool check_crossing_conditions(const QuadMesh& mesh, int vertex);
bool is_crossing_vertex(const QuadMesh& mesh, int vertex);

struct Classification {
  // Per edge: c at v0 (u = 0) and at v1 (u = 1).
  std::vector<std::array<int, 2>> edge_crossing;
  std::vector<int> vertex_crossing;  // c_+ per vertex
  int total_crossing_vertices = 0;   // F_+
};
Classification classify(const QuadMesh& mesh);
// c_tau(gamma) for edge e at vertex index v.
int crossing_at(const QuadMesh& mesh, int e, int v);

}  // namespace g1s
