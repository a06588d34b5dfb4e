#include "g1s/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "g1s/error.hpp"

namespace g1s {

using nlohmann::json;

namespace {

// Unit steps in native grid index space from corner c toward corner c+1.
constexpr int kStep[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

Rational det(const std::array<Rational, 2>& x, const std::array<Rational, 2>& y) {
  return x[0] * y[1] - x[1] * y[0];
}

LocalTriple reflect(const LocalTriple& t) { return {-t.A, t.B, t.C}; }

}  // namespace

GluingMode parse_gluing_mode(const std::string& name) {
  if (name == "symmetric") return GluingMode::Symmetric;
  if (name == "fan") return GluingMode::Fan;
  if (name == "constant-denominator" || name == "constant_denominator") return GluingMode::ConstantDenominator;
  if (name == "explicit") return GluingMode::Explicit;
  fail("ParseError", "unknown gluing mode '" + name + "'");
}

std::string gluing_mode_name(GluingMode mode) {
  switch (mode) {
    case GluingMode::Symmetric:
      return "symmetric";
    case GluingMode::Fan:
      return "fan";
    case GluingMode::ConstantDenominator:
      return "constant_denominator";
    case GluingMode::Explicit:
      return "explicit";
  }
  return "symmetric";
}

std::pair<int, int> CornerFrame::to_native(int i, int j, int m) const {
  static constexpr int kPos[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const int* fwd = kStep[corner];
  const int* back = kStep[(corner + 3) % 4];
  // Toward corner-1 is the reverse of the step from corner-1 to corner.
  const int du[2] = {u_forward ? fwd[0] : -back[0], u_forward ? fwd[1] : -back[1]};
  const int dv[2] = {u_forward ? -back[0] : fwd[0], u_forward ? -back[1] : fwd[1]};
  return {kPos[corner][0] * m + i * du[0] + j * dv[0], kPos[corner][1] * m + i * du[1] + j * dv[1]};
}

// ---------------------------------------------------------------- topology

QuadMesh QuadMesh::build(std::vector<Vertex> verts, std::vector<std::array<int, 4>> faces_by_id) {
  QuadMesh mesh;
  mesh.vertices = std::move(verts);
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    if (!mesh.id_to_index_.emplace(mesh.vertices[i].id, i).second) {
      fail("TopologyError", "duplicate vertex id " + std::to_string(mesh.vertices[i].id));
    }
  }
  if (faces_by_id.empty()) fail("TopologyError", "mesh has no faces");
  for (const auto& fid : faces_by_id) {
    Face f;
    for (int c = 0; c < 4; ++c) f.v[c] = mesh.vertex_index(fid[c]);
    std::set<int> distinct(f.v.begin(), f.v.end());
    if (distinct.size() != 4) fail("TopologyError", "face with repeated vertices");
    mesh.faces.push_back(f);
  }
  std::set<std::pair<int, int>> directed;
  for (int fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.faces[fi];
    for (int c = 0; c < 4; ++c) {
      const int a = f.v[c], b = f.v[(c + 1) % 4];
      if (!directed.emplace(a, b).second) {
        fail("TopologyError", "directed edge " + std::to_string(mesh.vertices[a].id) + "->" +
                                  std::to_string(mesh.vertices[b].id) +
                                  " used twice (inconsistent orientation or more than two faces)");
      }
      const bool swap = mesh.vertices[a].id > mesh.vertices[b].id;
      const std::pair<int, int> key = swap ? std::make_pair(b, a) : std::make_pair(a, b);
      auto it = mesh.edge_lookup_.find(key);
      if (it == mesh.edge_lookup_.end()) {
        Edge e;
        e.v0 = key.first;
        e.v1 = key.second;
        it = mesh.edge_lookup_.emplace(key, mesh.num_edges()).first;
        mesh.edges.push_back(e);
      }
      Edge& e = mesh.edges[it->second];
      if (std::find(e.faces.begin(), e.faces.end(), fi) != e.faces.end()) {
        fail("TopologyError", "edge glued to itself");
      }
      e.faces.push_back(fi);
      if (e.faces.size() > 2) fail("TopologyError", "edge with more than two faces");
    }
  }
  for (auto& e : mesh.edges) std::sort(e.faces.begin(), e.faces.end());

  // Stars: walk faces around each vertex in native orientation.
  mesh.stars.resize(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    VertexStar& st = mesh.stars[v];
    st.vertex = v;
    std::map<int, int> face_by_v_axis, face_by_u_axis;
    int incident = 0;
    for (int fi = 0; fi < mesh.num_faces(); ++fi) {
      const Face& f = mesh.faces[fi];
      for (int c = 0; c < 4; ++c) {
        if (f.v[c] != v) continue;
        ++incident;
        face_by_u_axis[mesh.edge_between(v, f.v[(c + 1) % 4])] = fi;
        face_by_v_axis[mesh.edge_between(v, f.v[(c + 3) % 4])] = fi;
      }
    }
    if (incident == 0) continue;  // isolated vertex: ignored by all counts
    std::vector<int> starts;
    for (const auto& [e, fi] : face_by_v_axis) {
      if (!face_by_u_axis.count(e)) starts.push_back(e);
    }
    if (starts.size() > 1) {
      fail("TopologyError", "non-manifold vertex " + std::to_string(mesh.vertices[v].id));
    }
    st.interior = starts.empty();
    int edge = st.interior ? face_by_v_axis.begin()->first : starts.front();
    st.edges.push_back(edge);
    while (true) {
      const int fi = face_by_v_axis.at(edge);
      st.faces.push_back(fi);
      st.corners.push_back(mesh.corner_of(fi, v));
      const int next = mesh.edge_between(v, mesh.faces[fi].v[(st.corners.back() + 1) % 4]);
      if (st.interior && next == st.edges.front()) break;
      st.edges.push_back(next);
      if (!face_by_v_axis.count(next)) break;
      edge = next;
      if (st.faces.size() > static_cast<std::size_t>(incident)) fail("TopologyError", "vertex walk did not close");
    }
    if (static_cast<int>(st.faces.size()) != incident) {
      fail("TopologyError", "non-manifold vertex " + std::to_string(mesh.vertices[v].id));
    }
  }
  return mesh;
}

int QuadMesh::num_interior_edges() const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.interior(); }));
}

bool QuadMesh::closed() const { return num_interior_edges() == num_edges(); }

int QuadMesh::vertex_index(int id) const {
  auto it = id_to_index_.find(id);
  if (it == id_to_index_.end()) fail("UnknownVertex", "unknown vertex id " + std::to_string(id));
  return it->second;
}

int QuadMesh::edge_between(int va, int vb) const {
  const bool swap = vertices[va].id > vertices[vb].id;
  auto it = edge_lookup_.find(swap ? std::make_pair(vb, va) : std::make_pair(va, vb));
  return it == edge_lookup_.end() ? -1 : it->second;
}

std::string QuadMesh::edge_key(int e) const {
  return std::to_string(vertices[edges[e].v0].id) + "-" + std::to_string(vertices[edges[e].v1].id);
}

int QuadMesh::edge_from_key(const std::string& key) const {
  const auto dash = key.find('-', 1);
  if (dash == std::string::npos) fail("ParseError", "bad edge key '" + key + "'");
  const int a = vertex_index(std::stoi(key.substr(0, dash)));
  const int b = vertex_index(std::stoi(key.substr(dash + 1)));
  const int e = edge_between(a, b);
  if (e < 0) fail("ParseError", "edge key '" + key + "' does not name a mesh edge");
  return e;
}

int QuadMesh::corner_of(int face, int vertex) const {
  for (int c = 0; c < 4; ++c) {
    if (faces[face].v[c] == vertex) return c;
  }
  fail("UnknownVertex", "vertex is not a corner of the face");
}

CornerFrame QuadMesh::sigma1_frame(int e) const {
  const Edge& ed = edges[e];
  const int f = ed.sigma1();
  const int c = corner_of(f, ed.v0);
  return {f, c, faces[f].v[(c + 1) % 4] == ed.v1};
}

CornerFrame QuadMesh::sigma0_frame(int e) const {
  const Edge& ed = edges[e];
  const int f = ed.sigma0();
  const int c = corner_of(f, ed.v0);
  return {f, c, faces[f].v[(c + 1) % 4] != ed.v1};
}

CornerFrame QuadMesh::vertex_frame(int face, int vertex) const { return {face, corner_of(face, vertex), true}; }

bool QuadMesh::stored_roles_match(int e, int vertex) const {
  const Edge& ed = edges[e];
  const int other = ed.v0 == vertex ? ed.v1 : ed.v0;
  const int f = ed.sigma1();
  const int c = corner_of(f, vertex);
  return faces[f].v[(c + 1) % 4] == other;
}

std::string QuadMesh::canonical_string() const {
  std::ostringstream os;
  os << "faces:";
  for (const Face& f : faces) {
    for (int c = 0; c < 4; ++c) os << vertices[f.v[c]].id << (c == 3 ? ';' : ',');
  }
  os << "gluing:" << gluing_mode_name(gluing.mode) << "," << gluing.degree << "," << gluing.regularity;
  for (int e = 0; e < num_edges(); ++e) {
    if (!edges[e].gluing) continue;
    const GluingTriple& g = *edges[e].gluing;
    os << "|" << edge_key(e);
    for (const UniSpline* s : {&g.a, &g.b, &g.c}) {
      for (int p = 0; p < 2; ++p) {
        os << ":";
        for (const auto& c : s->piece(p).coeffs()) os << to_string(c) << ",";
      }
    }
  }
  return os.str();
}

std::string QuadMesh::hash() const {
  // FNV-1a, 64 bit.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical_string()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

// ---------------------------------------------------------------- file format

namespace {

Poly parse_poly(const json& j) {
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(x.is_string() ? parse_rational(x.get<std::string>()) : parse_rational(x.dump()));
  return Poly(std::move(c));
}

json poly_json(const Poly& p) {
  json arr = json::array();
  for (const auto& c : p.coeffs()) arr.push_back(to_string(c));
  if (p.is_zero()) arr.push_back("0/1");
  return arr;
}

}  // namespace

QuadMesh parse_mesh(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    fail("ParseError", std::string("mesh JSON: ") + ex.what());
  }
  try {
    std::vector<Vertex> verts;
    for (const auto& jv : doc.at("vertices")) {
      Vertex v;
      v.id = jv.at("id").get<int>();
      if (jv.contains("position") && !jv["position"].is_null()) {
        const auto& p = jv["position"];
        if (p.size() != 3) fail("ParseError", "vertex position must have three coordinates");
        v.position = std::array<double, 3>{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
      }
      verts.push_back(v);
    }
    std::vector<std::array<int, 4>> faces;
    for (const auto& jf : doc.at("faces")) {
      if (jf.size() != 4) fail("TopologyError", "non-quad face");
      faces.push_back({jf[0].get<int>(), jf[1].get<int>(), jf[2].get<int>(), jf[3].get<int>()});
    }
    QuadMesh mesh = QuadMesh::build(std::move(verts), std::move(faces));
    if (doc.contains("gluing")) {
      const auto& jg = doc["gluing"];
      mesh.gluing.mode = parse_gluing_mode(jg.value("mode", std::string("symmetric")));
      mesh.gluing.degree = jg.value("degree", 2);
      mesh.gluing.regularity = jg.value("regularity", 0);
      if (jg.contains("edges")) {
        for (const auto& [key, je] : jg["edges"].items()) {
          const int e = mesh.edge_from_key(key);
          const int l = mesh.gluing.degree, s = mesh.gluing.regularity;
          auto spline = [&](const char* name) {
            const auto& js = je.at(name);
            return UniSpline::make(parse_poly(js.at("left")), parse_poly(js.at("right")), s, l);
          };
          mesh.explicit_triples[e] = GluingTriple::make(spline("a"), spline("b"), spline("c"));
        }
      }
    }
    if (mesh.gluing.mode == GluingMode::Explicit) {
      assign_explicit_gluing(mesh, mesh.explicit_triples);
    } else if (mesh.num_interior_edges() > 0) {
      assign_gluing(mesh, mesh.gluing.mode, mesh.gluing.degree, mesh.gluing.regularity);
    }
    return mesh;
  } catch (const json::exception& ex) {
    fail("ParseError", std::string("mesh JSON: ") + ex.what());
  }
}

QuadMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open mesh file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mesh(ss.str());
}

std::string mesh_to_json(const QuadMesh& mesh) {
  json doc;
  doc["vertices"] = json::array();
  for (const Vertex& v : mesh.vertices) {
    json jv{{"id", v.id}};
    if (v.position) jv["position"] = *v.position;
    doc["vertices"].push_back(jv);
  }
  doc["faces"] = json::array();
  for (const Face& f : mesh.faces) {
    doc["faces"].push_back({mesh.vertices[f.v[0]].id, mesh.vertices[f.v[1]].id, mesh.vertices[f.v[2]].id,
                            mesh.vertices[f.v[3]].id});
  }
  json jg{{"mode", gluing_mode_name(mesh.gluing.mode)},
          {"degree", mesh.gluing.degree},
          {"regularity", mesh.gluing.regularity}};
  if (mesh.gluing.mode == GluingMode::Explicit) {
    json edges = json::object();
    for (int e = 0; e < mesh.num_edges(); ++e) {
      if (!mesh.edges[e].gluing) continue;
      const GluingTriple& g = *mesh.edges[e].gluing;
      json je;
      const std::pair<const char*, const UniSpline*> comps[] = {{"a", &g.a}, {"b", &g.b}, {"c", &g.c}};
      for (const auto& [name, s] : comps) je[name] = {{"left", poly_json(s->left())}, {"right", poly_json(s->right())}};
      edges[mesh.edge_key(e)] = je;
    }
    jg["edges"] = edges;
  }
  doc["gluing"] = jg;
  return doc.dump(2);
}

// ---------------------------------------------------------------- gluing data

LocalTriple invert(const LocalTriple& t) { return {-t.A, t.C, t.B}; }

namespace {

// 2cos(2 pi / n) when rational.
std::optional<Rational> two_cos(int n) {
  switch (n) {
    case 1:
      return Rational(2);
    case 2:
      return Rational(-2);
    case 3:
      return Rational(-1);
    case 4:
      return Rational(0);
    case 6:
      return Rational(1);
    default:
      return std::nullopt;
  }
}

bool valid_fan(const FanVectors& u, bool interior) {
  const std::size_t n = u.size();
  const std::size_t sectors = interior ? n : n - 1;
  for (std::size_t i = 0; i < sectors; ++i) {
    if (sgn(det(u[i], u[(i + 1) % n])) <= 0) return false;
  }
  return true;
}

FanVectors rounded_fan(int count, double step, bool interior) {
  for (long den = 4; den <= (1L << 20); den *= 2) {
    FanVectors u;
    for (int i = 0; i < count; ++i) {
      const double ang = step * i;
      u.push_back({Rational(std::lround(std::cos(ang) * den), den), Rational(std::lround(std::sin(ang) * den), den)});
    }
    if (valid_fan(u, interior)) return u;
  }
  fail("DegenerateFan", "could not build a rational fan");
}

int star_valence(const VertexStar& st) { return static_cast<int>(st.faces.size()); }

LocalTriple local_from_mode(const QuadMesh& mesh, GluingMode mode, int vertex, int e,
                            const std::map<int, FanVectors>& fans) {
  const VertexStar& st = mesh.stars[vertex];
  const int F = star_valence(st);
  if (mode == GluingMode::Symmetric) {
    const int n = st.interior ? F : 2 * F;
    const auto c = two_cos(n);
    if (!c) {
      fail("IrrationalGluing", "symmetric gluing at vertex " + std::to_string(mesh.vertices[vertex].id) +
                                   " needs 2cos(2pi/" + std::to_string(n) +
                                   "), which is irrational; use fan or constant-denominator mode");
    }
    return {*c, -1, 1};
  }
  auto it = fans.find(vertex);
  const FanVectors u = it != fans.end() ? it->second : default_fan(mesh, vertex);
  if (u.size() != st.edges.size()) fail("DegenerateFan", "fan size differs from the vertex star");
  const int n = static_cast<int>(u.size());
  const int i = static_cast<int>(std::find(st.edges.begin(), st.edges.end(), e) - st.edges.begin());
  const auto& um = u[(i + n - 1) % n];
  const auto& u0 = u[i];
  const auto& up = u[(i + 1) % n];
  const Rational C = det(up, u0);
  if (sgn(C) == 0) fail("DegenerateFan", "zero sector determinant at vertex " + std::to_string(mesh.vertices[vertex].id));
  return {det(up, um), -det(u0, um), C};
}

// Endpoint triple in the stored edge frame.
LocalTriple stored_end(const QuadMesh& mesh, int e, int vertex, const LocalTriple& local) {
  LocalTriple t = mesh.stored_roles_match(e, vertex) ? local : invert(local);
  if (vertex == mesh.edges[e].v1) t = reflect(t);
  if (sgn(t.C) < 0) t = {-t.A, -t.B, -t.C};
  return t;
}

}  // namespace

FanVectors default_fan(const QuadMesh& mesh, int vertex) {
  const VertexStar& st = mesh.stars[vertex];
  const int F = star_valence(st);
  using V = std::array<Rational, 2>;
  if (st.interior) {
    switch (F) {
      case 3:
        return {V{1, 0}, V{0, 1}, V{-1, -1}};
      case 4:
        return {V{1, 0}, V{0, 1}, V{-1, 0}, V{0, -1}};
      case 6:
        return {V{1, 0}, V{0, 1}, V{-1, 1}, V{-1, 0}, V{0, -1}, V{1, -1}};
      default:
        if (F < 3) fail("DegenerateFan", "interior vertex of valence < 3 has no fan");
        return rounded_fan(F, 2 * M_PI / F, true);
    }
  }
  switch (F) {
    case 1:
      return {V{1, 0}, V{0, 1}};
    case 2:
      return {V{1, 0}, V{0, 1}, V{-1, 0}};
    case 3:
      return {V{1, 0}, V{0, 1}, V{-1, 1}, V{-1, 0}};
    default:
      return rounded_fan(F + 1, M_PI / F, false);
  }
}

void assign_gluing(QuadMesh& mesh, GluingMode mode, int l, int s, const std::map<int, FanVectors>& fans) {
  if (mode == GluingMode::Explicit) {
    assign_explicit_gluing(mesh, mesh.explicit_triples);
    return;
  }
  const auto [d0, d1] = hermite_blends(l, s);
  mesh.gluing = {mode, l, s};
  for (int e = 0; e < mesh.num_edges(); ++e) {
    Edge& ed = mesh.edges[e];
    ed.gluing.reset();
    if (!ed.interior()) continue;
    const LocalTriple t0 = stored_end(mesh, e, ed.v0, local_from_mode(mesh, mode, ed.v0, e, fans));
    const LocalTriple t1 = stored_end(mesh, e, ed.v1, local_from_mode(mesh, mode, ed.v1, e, fans));
    if (mode == GluingMode::Fan) {
      ed.gluing = GluingTriple::make(t0.A * d0 + t1.A * d1, t0.B * d0 + t1.B * d1, t0.C * d0 + t1.C * d1);
    } else {
      ed.gluing = GluingTriple::make((t0.A / t0.C) * d0 + (t1.A / t1.C) * d1, (t0.B / t0.C) * d0 + (t1.B / t1.C) * d1,
                                     UniSpline::constant(1, l));
    }
  }
}

void assign_explicit_gluing(QuadMesh& mesh, const std::map<int, GluingTriple>& triples) {
  mesh.gluing.mode = GluingMode::Explicit;
  mesh.explicit_triples = triples;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    Edge& ed = mesh.edges[e];
    ed.gluing.reset();
    if (!ed.interior()) continue;
    auto it = triples.find(e);
    if (it == triples.end()) fail("ParseError", "explicit gluing missing for edge " + mesh.edge_key(e));
    ed.gluing = it->second;
  }
}

// ---------------------------------------------------------------- vertex conditions

std::array<Poly, 3> local_gluing(const QuadMesh& mesh, int e, int vertex) {
  const Edge& ed = mesh.edges[e];
  if (!ed.gluing) fail("DomainError", "edge " + mesh.edge_key(e) + " has no gluing data");
  const GluingTriple& g = *ed.gluing;
  std::array<Poly, 3> t;
  if (vertex == ed.v0) {
    t = {g.a.left(), g.b.left(), g.c.left()};
  } else {
    t = {-g.a.right().compose_affine(-1, 1), g.b.right().compose_affine(-1, 1), g.c.right().compose_affine(-1, 1)};
  }
  if (!mesh.stored_roles_match(e, vertex)) t = {-t[0], t[2], t[1]};
  return t;
}

CycleCheck check_vertex_cycle(const QuadMesh& mesh, int vertex) {
  const VertexStar& st = mesh.stars[vertex];
  CycleCheck out;
  out.product = {{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}};
  if (!st.interior) fail("NotApplicable", "vertex cycle condition needs an interior vertex");
  for (int e : st.edges) {
    const auto t = local_gluing(mesh, e, vertex);
    const Rational c0 = t[2](Rational(0));
    const Rational a = t[0](Rational(0)) / c0, b = t[1](Rational(0)) / c0;
    const auto& P = out.product;
    out.product = {{{P[0][1] * b, P[0][0] + P[0][1] * a}, {P[1][1] * b, P[1][0] + P[1][1] * a}}};
  }
  out.ok = out.product[0][0] == 1 && out.product[0][1] == 0 && out.product[1][0] == 0 && out.product[1][1] == 1;
  return out;
}

int crossing_at(const QuadMesh& mesh, int e, int v) {
  const Edge& ed = mesh.edges[e];
  if (!ed.interior() || !ed.gluing) return 0;
  if (v == ed.v0) return ed.gluing->crossing_at_0() ? 1 : 0;
  if (v == ed.v1) return ed.gluing->crossing_at_1() ? 1 : 0;
  fail("UnknownVertex", "vertex is not an end of the edge");
}

bool is_crossing_vertex(const QuadMesh& mesh, int vertex) {
  const VertexStar& st = mesh.stars[vertex];
  if (!st.interior || st.edges.size() != 4) return false;
  for (int e : st.edges) {
    if (!crossing_at(mesh, e, vertex)) return false;
  }
  return true;
}

bool check_crossing_conditions(const QuadMesh& mesh, int vertex) {
  if (!is_crossing_vertex(mesh, vertex)) fail("NotApplicable", "vertex is not a crossing vertex");
  const VertexStar& st = mesh.stars[vertex];
  std::array<Rational, 4> a1, b0, b1;
  for (int i = 0; i < 4; ++i) {
    const auto t = local_gluing(mesh, st.edges[i], vertex);
    const Rational z(0);
    const Rational c = t[2](z), dc = t[2].derivative()(z);
    a1[i] = (t[0].derivative()(z) * c - t[0](z) * dc) / (c * c);
    b0[i] = t[1](z) / c;
    b1[i] = (t[1].derivative()(z) * c - t[1](z) * dc) / (c * c);
  }
  const bool ddv1 = a1[0] + b1[3] / b0[3] == -b0[0] * (a1[2] + b1[1] / b0[1]);
  const bool ddv2 = a1[1] + b1[0] / b0[0] == -b0[1] * (a1[3] + b1[2] / b0[2]);
  return ddv1 && ddv2;
}

Classification classify(const QuadMesh& mesh) {
  Classification c;
  c.edge_crossing.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    c.edge_crossing[e] = {crossing_at(mesh, e, mesh.edges[e].v0), crossing_at(mesh, e, mesh.edges[e].v1)};
  }
  c.vertex_crossing.resize(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    c.vertex_crossing[v] = is_crossing_vertex(mesh, v) ? 1 : 0;
    c.total_crossing_vertices += c.vertex_crossing[v];
  }
  return c;
}

}  // namespace g1s
