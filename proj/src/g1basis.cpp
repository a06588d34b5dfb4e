#include "g1s/g1basis.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "g1s/error.hpp"

namespace g1s {

namespace {

void sort_row(SparseRow& r) {
  std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
}

SparseRow from_map(const std::map<int, Rational>& m) {
  SparseRow r;
  for (const auto& [c, v] : m) {
    if (sgn(v) != 0) r.emplace_back(c, v);
  }
  return r;
}

Rational lookup(const SparseRow& row, int col) {
  auto it = std::lower_bound(row.begin(), row.end(), col, [](const auto& e, int c) { return e.first < c; });
  return (it != row.end() && it->first == col) ? it->second : Rational(0);
}

SparseRow combine(const std::vector<SparseRow>& vecs, const SparseRow& weights) {
  SparseRow acc;
  for (const auto& [g, w] : weights) acc = axpy(acc, -w, vecs[g]);
  return acc;
}

// Runs fn(i) for i in [0, n) on up to worker_count() threads; rethrows the
// first exception.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void require_structured(const SplineLayout& lay) {
  if (lay.m < 4) {
    fail("DimensionTooSmall", "structured basis needs m = 2k - r >= 4; use the oracle for smaller spaces");
  }
}

const GluingTriple& gluing_of(const QuadMesh& mesh, int e) {
  const Edge& ed = mesh.edges[e];
  if (!ed.interior()) fail("DomainError", "edge " + mesh.edge_key(e) + " is a boundary edge");
  if (!ed.gluing) fail("DomainError", "edge " + mesh.edge_key(e) + " has no gluing data");
  return *ed.gluing;
}

// Corner-block indices (frame (0,0),(1,0),(0,1),(1,1)) of face at vertex.
std::array<int, 4> corner_block(const QuadMesh& mesh, const SplineLayout& lay, int face, int vertex) {
  const CornerFrame fr = mesh.vertex_frame(face, vertex);
  return {lay.index(fr, 0, 0), lay.index(fr, 1, 0), lay.index(fr, 0, 1), lay.index(fr, 1, 1)};
}

// Frame of a face with origin at edge.v0 and u along the edge.
CornerFrame edge_frame(const QuadMesh& mesh, int e, int face) {
  const Edge& ed = mesh.edges[e];
  const int c = mesh.corner_of(face, ed.v0);
  return {face, c, mesh.faces[face].v[(c + 1) % 4] == ed.v1};
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("G1_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------- SplineFunction

Rational SplineFunction::coefficient(int face, int i, int j) const { return lookup(coeffs, layout.index(face, i, j)); }

std::vector<std::vector<Rational>> SplineFunction::grid(int face) const {
  std::vector<std::vector<Rational>> g(layout.side(), std::vector<Rational>(layout.side()));
  const int lo = face * layout.face_size();
  for (const auto& [c, v] : coeffs) {
    if (c < lo || c >= lo + layout.face_size()) continue;
    g[(c - lo) / layout.side()][(c - lo) % layout.side()] = v;
  }
  return g;
}

std::vector<int> SplineFunction::support_faces() const {
  std::set<int> faces;
  for (const auto& [c, v] : coeffs) faces.insert(c / layout.face_size());
  return {faces.begin(), faces.end()};
}

SplineFunction SplineFunction::from_grids(const SplineLayout& layout,
                                          const std::map<int, std::vector<std::vector<Rational>>>& grids) {
  SplineFunction f{layout, {}};
  for (const auto& [face, g] : grids) {
    if (face < 0 || face >= layout.num_faces) fail("ShapeMismatch", "grid for unknown face " + std::to_string(face));
    if (static_cast<int>(g.size()) != layout.side()) fail("ShapeMismatch", "grid row count differs from m + 1");
    for (int i = 0; i < layout.side(); ++i) {
      if (static_cast<int>(g[i].size()) != layout.side()) fail("ShapeMismatch", "grid column count differs from m + 1");
      for (int j = 0; j < layout.side(); ++j) {
        if (sgn(g[i][j]) != 0) f.coeffs.emplace_back(layout.index(face, i, j), g[i][j]);
      }
    }
  }
  sort_row(f.coeffs);
  return f;
}

std::map<std::string, int> BasisSet::counts_by_kind() const {
  std::map<std::string, int> counts{{"vertex", 0}, {"edge", 0}, {"face", 0}, {"free", 0}};
  for (const auto& t : tags) ++counts[t.substr(0, t.find(':'))];
  return counts;
}

// ---------------------------------------------------------------- operators

TaylorJet taylor_vertex(const QuadMesh& mesh, const SplineFunction& f, int vertex) {
  if (vertex < 0 || vertex >= mesh.num_vertices()) fail("UnknownVertex", "vertex index out of range");
  TaylorJet jet;
  jet.vertex = vertex;
  for (int face : mesh.stars[vertex].faces) {
    const auto blk = corner_block(mesh, f.layout, face, vertex);
    jet.faces.push_back(face);
    jet.blocks.push_back({lookup(f.coeffs, blk[0]), lookup(f.coeffs, blk[1]), lookup(f.coeffs, blk[2]),
                          lookup(f.coeffs, blk[3])});
  }
  return jet;
}

SplineFunction restrict_edge(const QuadMesh& mesh, const SplineFunction& f, int e, int sigma) {
  SplineFunction out{f.layout, {}};
  const auto& fs = mesh.edges[e].faces;
  if (std::find(fs.begin(), fs.end(), sigma) == fs.end()) return out;
  const CornerFrame fr = edge_frame(mesh, e, sigma);
  std::set<int> keep;
  for (int i = 0; i <= f.layout.m; ++i) {
    for (int j = 0; j <= 1; ++j) keep.insert(f.layout.index(fr, i, j));
  }
  for (const auto& entry : f.coeffs) {
    if (keep.count(entry.first)) out.coeffs.push_back(entry);
  }
  return out;
}

SplineFunction restrict_face(const SplineFunction& f, int sigma) {
  SplineFunction out{f.layout, {}};
  const int m = f.layout.m;
  for (const auto& entry : f.coeffs) {
    const int local = entry.first - sigma * f.layout.face_size();
    if (local < 0 || local >= f.layout.face_size()) continue;
    const int i = local / f.layout.side(), j = local % f.layout.side();
    if (i <= 1 || j <= 1 || i >= m - 1 || j >= m - 1) out.coeffs.push_back(entry);
  }
  return out;
}

std::vector<SparseRow> edge_constraint_rows(const QuadMesh& mesh, int e, const SplineLayout& lay) {
  const GluingTriple& g = gluing_of(mesh, e);
  const BSplineBasis& bs = bspline_basis(lay.k, lay.r);
  const CornerFrame f1 = mesh.sigma1_frame(e), f0 = mesh.sigma0_frame(e);
  const int m = lay.m;
  const Rational two_k(2 * lay.k);
  std::vector<SparseRow> rows;
  for (int i = 0; i <= m; ++i) {
    SparseRow r{{lay.index(f1, i, 0), Rational(1)}, {lay.index(f0, 0, i), Rational(-1)}};
    sort_row(r);
    rows.push_back(std::move(r));
  }
  for (int p = 0; p < 2; ++p) {
    const Poly& ap = g.a.piece(p);
    const Poly& bp = g.b.piece(p);
    const Poly& cp = g.c.piece(p);
    std::vector<std::map<int, Rational>> by_power;
    auto add = [&](int col, const Poly& poly, const Rational& s) {
      const auto& cf = poly.coeffs();
      if (by_power.size() < cf.size()) by_power.resize(cf.size());
      for (std::size_t d = 0; d < cf.size(); ++d) by_power[d][col] += s * cf[d];
    };
    for (int i = 0; i <= m; ++i) {
      const Poly& N = bs.piece(i, p);
      if (N.is_zero()) continue;
      const Poly cN = cp * N, bN = bp * N, aN = ap * bs.derivative_piece(i, p);
      add(lay.index(f1, i, 1), cN, two_k);
      add(lay.index(f1, i, 0), cN, -two_k);
      add(lay.index(f0, 1, i), bN, -two_k);
      add(lay.index(f0, 0, i), bN, two_k);
      add(lay.index(f0, 0, i), aN, Rational(-1));
    }
    for (const auto& mp : by_power) {
      SparseRow r = from_map(mp);
      if (!r.empty()) rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::map<int, EdgeResidual> g1_residual(const QuadMesh& mesh, const SplineFunction& f) {
  const SplineLayout& lay = f.layout;
  const BSplineBasis& bs = bspline_basis(lay.k, lay.r);
  std::map<int, EdgeResidual> out;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edges[e].interior()) continue;
    const GluingTriple& g = gluing_of(mesh, e);
    const CornerFrame f1 = mesh.sigma1_frame(e), f0 = mesh.sigma0_frame(e);
    auto c = [&](const CornerFrame& fr, int i, int j) { return lookup(f.coeffs, lay.index(fr, i, j)); };
    std::vector<Rational> t(lay.m + 1);
    for (int i = 0; i <= lay.m; ++i) t[i] = c(f1, i, 0) - c(f0, 0, i);
    EdgeResidual res;
    res.trace = bs.from_bspline(t);
    std::array<Poly, 2> pieces;
    for (int p = 0; p < 2; ++p) {
      Poly X, Y, Z;
      for (int i = 0; i <= lay.m; ++i) {
        const Poly& N = bs.piece(i, p);
        X += N * (Rational(2 * lay.k) * (c(f1, i, 1) - c(f1, i, 0)));
        Y += N * (Rational(2 * lay.k) * (c(f0, 1, i) - c(f0, 0, i)));
        Z += bs.derivative_piece(i, p) * c(f0, 0, i);
      }
      pieces[p] = g.c.piece(p) * X - g.b.piece(p) * Y - g.a.piece(p) * Z;
    }
    const int deg = std::max({pieces[0].degree(), pieces[1].degree(), 0});
    res.derivative = UniSpline::make(pieces[0], pieces[1], -1, deg);
    out.emplace(e, std::move(res));
  }
  return out;
}

// ---------------------------------------------------------------- edges

SplineFunction theta_edge(const QuadMesh& mesh, int e, const Rational& a0, const SplineSyzTriple& s,
                          const SplineLayout& lay) {
  const BSplineBasis& bs = bspline_basis(lay.k, lay.r);
  if (s.A.left().degree() > lay.k - 1 || s.A.right().degree() > lay.k - 1) {
    fail("ProfileViolation", "syzygy component A must have degree <= k - 1");
  }
  std::vector<Rational> F, B, C;
  try {
    const UniSpline prim = s.A.antiderivative();
    const UniSpline Fs = UniSpline::make(prim.left() + Poly::constant(a0), prim.right() + Poly::constant(a0),
                                         prim.regularity(), lay.k);
    F = bs.to_bspline(Fs);
    B = bs.to_bspline(s.B);
    C = bs.to_bspline(s.C);
  } catch (const Error& ex) {
    fail("ProfileViolation", std::string("syzygy does not have the relaxed profile: ") + ex.what());
  }
  const CornerFrame f1 = mesh.sigma1_frame(e), f0 = mesh.sigma0_frame(e);
  const Rational inv(1, 2 * lay.k);
  std::map<int, Rational> acc;
  for (int i = 0; i <= lay.m; ++i) {
    acc[lay.index(f1, i, 0)] += F[i];
    acc[lay.index(f1, i, 1)] += F[i] - C[i] * inv;
    acc[lay.index(f0, 0, i)] += F[i];
    acc[lay.index(f0, 1, i)] += F[i] + B[i] * inv;
  }
  return {lay, from_map(acc)};
}

std::vector<SplineSyzTriple> relaxed_syzygy_basis(const GluingTriple& g, int k, int r) {
  try {
    return build_syz_basis(g, k, r, true).elements;
  } catch (const Error& ex) {
    if (ex.code() != "RangeViolation" && ex.code() != "GcdViolation") throw;
    return brute_force_syz_basis(g, SyzProfile{k, r - 1, r, r});
  }
}

namespace {

struct ThetaSystem {
  std::vector<SparseRow> images;  // Theta(1, 0) followed by Theta(0, z_i)
  std::vector<SparseRow> jets;    // 16 functionals evaluated on the images
  int required = 0;
};

ThetaSystem theta_system(const QuadMesh& mesh, int e, const SplineLayout& lay) {
  const GluingTriple& g = gluing_of(mesh, e);
  const Edge& ed = mesh.edges[e];
  ThetaSystem sys;
  const SplineSyzTriple zero{UniSpline::make({}, {}, lay.r - 1, lay.k - 1), UniSpline::make({}, {}, lay.r, lay.k),
                             UniSpline::make({}, {}, lay.r, lay.k)};
  sys.images.push_back(theta_edge(mesh, e, 1, zero, lay).coeffs);
  for (const auto& z : relaxed_syzygy_basis(g, lay.k, lay.r)) sys.images.push_back(theta_edge(mesh, e, 0, z, lay).coeffs);
  std::vector<int> functionals;
  for (int v : {ed.v0, ed.v1}) {
    for (int face : ed.faces) {
      for (int idx : corner_block(mesh, lay, face, v)) functionals.push_back(idx);
    }
  }
  for (int idx : functionals) {
    SparseRow row;
    for (int gi = 0; gi < static_cast<int>(sys.images.size()); ++gi) {
      const Rational v = lookup(sys.images[gi], idx);
      if (sgn(v) != 0) row.emplace_back(gi, v);
    }
    sys.jets.push_back(std::move(row));
  }
  sys.required = 10 - crossing_at(mesh, e, ed.v0) - crossing_at(mesh, e, ed.v1);
  return sys;
}

}  // namespace

SeparabilityReport separability(const QuadMesh& mesh, int e, int k, int r) {
  const SplineLayout lay(k, r, mesh.num_faces());
  const ThetaSystem sys = theta_system(mesh, e, lay);
  SeparabilityReport rep;
  rep.rank = rank(sys.jets, static_cast<int>(sys.images.size()));
  rep.required = sys.required;
  rep.separable = rep.rank == rep.required;
  return rep;
}

int separability_bound(const GluingTriple& g, int r) {
  const MuBasis m1 = mu_basis(piece_triple(g, 0));
  const MuBasis m2 = mu_basis(piece_triple(g, 1));
  return std::max({m1.nu + 2, m2.nu + 2, m1.mu + r + 1, m2.mu + r + 1});
}

int separability_degree(const QuadMesh& mesh, int e, int r, int kmin, int kmax) {
  for (int k = std::max(kmin, r + 1); k <= kmax; ++k) {
    if (2 * k - r < 4) continue;
    if (separability(mesh, e, k, r).separable) return k;
  }
  return -1;
}

std::vector<SplineFunction> edge_basis(const QuadMesh& mesh, int e, int k, int r) {
  const SplineLayout lay(k, r, mesh.num_faces());
  require_structured(lay);
  const ThetaSystem sys = theta_system(mesh, e, lay);
  const int n = static_cast<int>(sys.images.size());
  RowEchelon ech(n);
  for (const auto& row : sys.jets) ech.add(row);
  if (ech.rank() != sys.required) {
    fail("SeparabilityNotReached", "edge " + mesh.edge_key(e) + " is not separable at k = " + std::to_string(k) +
                                       " (rank " + std::to_string(ech.rank()) + " < " +
                                       std::to_string(sys.required) + ")");
  }
  std::vector<SplineFunction> out;
  for (const auto& w : ech.nullspace()) out.push_back({lay, combine(sys.images, w)});
  return out;
}

// ---------------------------------------------------------------- vertices

namespace {

struct JetSystem {
  int F = 0;
  int num_unknowns = 0;
  std::vector<SparseRow> rows;
};

// Jet-constraint system at a vertex: unknowns are the 4F corner blocks in the
// star frames plus, per interior edge, the third trace coefficient.
JetSystem jet_system(const QuadMesh& mesh, int vertex, int k, int r) {
  const VertexStar& st = mesh.stars[vertex];
  const BSplineBasis& bs = bspline_basis(k, r);
  const Rational n0 = bs.derivative_at_zero(0, 1), n1 = bs.derivative_at_zero(1, 1);
  const Rational s0 = bs.derivative_at_zero(0, 2), s1 = bs.derivative_at_zero(1, 2), s2 = bs.derivative_at_zero(2, 2);
  JetSystem js;
  js.F = static_cast<int>(st.faces.size());
  const int F = js.F;
  const int E = static_cast<int>(st.edges.size());
  std::vector<int> interior_slots;
  for (int i = 0; i < E; ++i) {
    if (mesh.edges[st.edges[i]].interior()) interior_slots.push_back(i);
  }
  js.num_unknowns = 4 * F + static_cast<int>(interior_slots.size());
  for (std::size_t w = 0; w < interior_slots.size(); ++w) {
    const int i = interior_slots[w];
    const int e = st.edges[i];
    const int t1 = (i - 1 + F) % F;  // sigma_1 role: edge is its u axis
    const int t0 = i % F;            // sigma_0 role: edge is its v axis
    const int wcol = 4 * F + static_cast<int>(w);
    auto J1 = [&](int q) { return 4 * t1 + q; };
    auto J0 = [&](int q) { return 4 * t0 + q; };
    const auto loc = local_gluing(mesh, e, vertex);
    const Rational z(0);
    const Rational a = loc[0](z), b = loc[1](z), c = loc[2](z);
    const Rational da = loc[0].derivative()(z), db = loc[1].derivative()(z), dc = loc[2].derivative()(z);
    using Lin = std::map<int, Rational>;
    auto lin = [](std::initializer_list<std::pair<int, Rational>> terms) {
      Lin l;
      for (const auto& [col, v] : terms) l[col] += v;
      return l;
    };
    auto scaled = [](const Lin& l, const Rational& s) {
      Lin o;
      for (const auto& [col, v] : l) o[col] = v * s;
      return o;
    };
    auto plus = [](Lin x, const Lin& y) {
      for (const auto& [col, v] : y) x[col] += v;
      return x;
    };
    // q = 0: c00, 1: c10, 2: c01, 3: c11.
    const Lin X0 = lin({{J1(0), n0}, {J1(2), n1}});
    const Lin X1 = plus(scaled(X0, n0), scaled(lin({{J1(1), n0}, {J1(3), n1}}), n1));
    const Lin Y0 = lin({{J0(0), n0}, {J0(1), n1}});
    const Lin Y1 = plus(scaled(Y0, n0), scaled(lin({{J0(2), n0}, {J0(3), n1}}), n1));
    const Lin Z0 = lin({{J0(0), n0}, {J0(2), n1}});
    const Lin Z1 = lin({{J0(0), s0}, {J0(2), s1}, {wcol, s2}});
    js.rows.push_back(from_map(lin({{J1(0), Rational(1)}, {J0(0), Rational(-1)}})));
    js.rows.push_back(from_map(lin({{J1(1), Rational(1)}, {J0(2), Rational(-1)}})));
    js.rows.push_back(from_map(plus(plus(scaled(X0, c), scaled(Y0, -b)), scaled(Z0, -a))));
    Lin d1 = plus(scaled(X0, dc), scaled(X1, c));
    d1 = plus(d1, plus(scaled(Y0, -db), scaled(Y1, -b)));
    d1 = plus(d1, plus(scaled(Z0, -da), scaled(Z1, -a)));
    js.rows.push_back(from_map(d1));
  }
  return js;
}

SparseRow cross_functional(int t) {
  return {{4 * t, Rational(1)}, {4 * t + 1, Rational(-1)}, {4 * t + 2, Rational(-1)}, {4 * t + 3, Rational(1)}};
}

// Element of H (given by basis rows) satisfying the fixed coordinates and as
// many of the preferred vanishing functionals as stay consistent.
std::optional<SparseRow> pick_in_h(const HSpace& H, int F, const std::vector<std::pair<int, Rational>>& fixed,
                                   const std::vector<SparseRow>& prefer) {
  const int h = static_cast<int>(H.basis.size());
  // Functional phi on x = sum lambda_i h_i is the row (phi . h_i)_i.
  auto pull = [&](const SparseRow& phi) {
    SparseRow r;
    for (int i = 0; i < h; ++i) {
      const Rational v = dot(phi, H.basis[i]);
      if (sgn(v) != 0) r.emplace_back(i, v);
    }
    return r;
  };
  std::vector<SparseRow> rows;
  std::vector<Rational> rhs;
  for (const auto& [col, val] : fixed) {
    rows.push_back(pull(SparseRow{{col, Rational(1)}}));
    rhs.push_back(val);
  }
  auto sol = solve(rows, rhs, h);
  if (!sol) return std::nullopt;
  for (const auto& phi : prefer) {
    rows.push_back(pull(phi));
    rhs.emplace_back(0);
    auto trial = solve(rows, rhs, h);
    if (trial) {
      sol = trial;
    } else {
      rows.pop_back();
      rhs.pop_back();
    }
  }
  SparseRow x;
  for (int i = 0; i < h; ++i) {
    if (sgn((*sol)[i]) != 0) x = axpy(x, -(*sol)[i], H.basis[i]);
  }
  (void)F;
  return x;
}

// Extends a jet vector at vertex to a spline supported near the vertex by
// solving, per incident interior edge, for the strip interior coefficients.
SplineFunction lift_jets(const QuadMesh& mesh, int vertex, const SparseRow& jets, const SplineLayout& lay) {
  const VertexStar& st = mesh.stars[vertex];
  std::map<int, Rational> base;
  for (const auto& [col, v] : jets) {
    const int t = col / 4, q = col % 4;
    const auto blk = corner_block(mesh, lay, st.faces[t], vertex);
    base[blk[q]] += v;
  }
  SparseRow base_row = from_map(base);
  std::map<int, Rational> result = base;
  for (int e : st.edges) {
    if (!mesh.edges[e].interior()) continue;
    const CornerFrame f1 = mesh.sigma1_frame(e), f0 = mesh.sigma0_frame(e);
    std::map<int, int> local;
    for (int i = 2; i <= lay.m - 2; ++i) {
      for (int idx : {lay.index(f1, i, 0), lay.index(f1, i, 1), lay.index(f0, 0, i), lay.index(f0, 1, i)}) {
        local.emplace(idx, static_cast<int>(local.size()));
      }
    }
    std::vector<SparseRow> rows;
    std::vector<Rational> rhs;
    for (const auto& row : edge_constraint_rows(mesh, e, lay)) {
      SparseRow lr;
      Rational known = 0;
      for (const auto& [c, v] : row) {
        auto it = local.find(c);
        if (it != local.end()) {
          lr.emplace_back(it->second, v);
        } else {
          known += v * lookup(base_row, c);
        }
      }
      sort_row(lr);
      rows.push_back(std::move(lr));
      rhs.push_back(-known);
    }
    const auto y = solve(rows, rhs, static_cast<int>(local.size()));
    if (!y) {
      fail("SeparabilityNotReached", "vertex " + std::to_string(mesh.vertices[vertex].id) +
                                         ": jets cannot be extended along edge " + mesh.edge_key(e));
    }
    for (const auto& [idx, li] : local) {
      if (sgn((*y)[li]) != 0) result[idx] += (*y)[li];
    }
  }
  return {lay, from_map(result)};
}

bool has_interior_edge(const QuadMesh& mesh, int vertex) {
  for (int e : mesh.stars[vertex].edges) {
    if (mesh.edges[e].interior()) return true;
  }
  return false;
}

}  // namespace

HSpace h_space(const QuadMesh& mesh, int vertex, int k, int r) {
  if (vertex < 0 || vertex >= mesh.num_vertices()) fail("UnknownVertex", "vertex index out of range");
  const JetSystem js = jet_system(mesh, vertex, k, r);
  HSpace H;
  H.vertex = vertex;
  H.faces = mesh.stars[vertex].faces;
  RowEchelon proj(4 * js.F);
  for (const auto& v : nullspace(js.rows, js.num_unknowns)) {
    SparseRow p;
    for (const auto& [c, val] : v) {
      if (c < 4 * js.F) p.emplace_back(c, val);
    }
    proj.add(std::move(p));
  }
  H.basis = proj.rows();
  H.dimension = proj.rank();
  return H;
}

std::vector<SplineFunction> vertex_basis(const QuadMesh& mesh, int vertex, int k, int r) {
  const SplineLayout lay(k, r, mesh.num_faces());
  require_structured(lay);
  if (!has_interior_edge(mesh, vertex)) fail("DomainError", "vertex has no interior edge");
  for (int e : mesh.stars[vertex].edges) {
    if (mesh.edges[e].interior() && !separability(mesh, e, k, r).separable) {
      fail("SeparabilityNotReached", "edge " + mesh.edge_key(e) + " is not separable at k = " + std::to_string(k));
    }
  }
  const HSpace H = h_space(mesh, vertex, k, r);
  const int F = static_cast<int>(H.faces.size());
  const Rational d(1, 2 * k), dd(1, 4 * k * k);
  RowEchelon chosen(4 * F);
  std::vector<SparseRow> jets;
  auto accept = [&](const std::optional<SparseRow>& x) {
    if (x && static_cast<int>(jets.size()) < H.dimension && chosen.add(*x)) jets.push_back(*x);
  };
  // Value: constant one.
  {
    SparseRow ones;
    for (int c = 0; c < 4 * F; ++c) ones.emplace_back(c, Rational(1));
    RowEchelon h(4 * F);
    for (const auto& b : H.basis) h.add(b);
    if (!h.contains(ones)) fail("InternalError", "constant function jets are not in H");
    accept(ones);
  }
  std::vector<SparseRow> prefer_rest;
  for (int t = 1; t < F; ++t) prefer_rest.push_back(cross_functional(t));
  // First derivatives, prescribed on the first star face.
  accept(pick_in_h(H, F, {{0, 0}, {1, 0}, {2, d}, {3, d}}, prefer_rest));
  accept(pick_in_h(H, F, {{0, 0}, {1, d}, {2, 0}, {3, d}}, prefer_rest));
  // Cross derivatives, one candidate per face.
  for (int t = 0; t < F && static_cast<int>(jets.size()) < H.dimension; ++t) {
    std::vector<SparseRow> prefer;
    for (int u = 0; u < F; ++u) {
      if (u != t) prefer.push_back(cross_functional(u));
    }
    accept(pick_in_h(H, F, {{4 * t, 0}, {4 * t + 1, 0}, {4 * t + 2, 0}, {4 * t + 3, dd}}, prefer));
  }
  for (const auto& b : H.basis) accept(b);
  if (static_cast<int>(jets.size()) != H.dimension) fail("InternalError", "vertex jet basis incomplete");
  std::vector<SplineFunction> out;
  for (const auto& x : jets) out.push_back(lift_jets(mesh, vertex, x, lay));
  return out;
}

std::vector<SplineFunction> face_basis(const QuadMesh& mesh, int face, int k, int r) {
  const SplineLayout lay(k, r, mesh.num_faces());
  std::vector<SplineFunction> out;
  for (int i = 2; i <= lay.m - 2; ++i) {
    for (int j = 2; j <= lay.m - 2; ++j) out.push_back({lay, {{lay.index(face, i, j), Rational(1)}}});
  }
  return out;
}

namespace {

// Coefficient slots untouched by any constraint: boundary-edge strip
// interiors and corner blocks at vertices without interior edges.
std::vector<int> free_slots(const QuadMesh& mesh, const SplineLayout& lay) {
  std::vector<int> slots;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges[e].interior()) continue;
    const CornerFrame fr = edge_frame(mesh, e, mesh.edges[e].faces[0]);
    for (int i = 2; i <= lay.m - 2; ++i) {
      for (int j = 0; j <= 1; ++j) slots.push_back(lay.index(fr, i, j));
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.stars[v].faces.empty() || has_interior_edge(mesh, v)) continue;
    for (int face : mesh.stars[v].faces) {
      for (int idx : corner_block(mesh, lay, face, v)) slots.push_back(idx);
    }
  }
  std::sort(slots.begin(), slots.end());
  return slots;
}

std::vector<int> non_separable_edges(const QuadMesh& mesh, int k, int r) {
  std::vector<int> interior;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges[e].interior()) interior.push_back(e);
  }
  std::vector<char> ok(interior.size());
  parallel_for(static_cast<int>(interior.size()),
               [&](int i) { ok[i] = separability(mesh, interior[i], k, r).separable ? 1 : 0; });
  std::vector<int> bad;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    if (!ok[i]) bad.push_back(interior[i]);
  }
  return bad;
}

void require_separable(const QuadMesh& mesh, int k, int r, const char* code) {
  const auto bad = non_separable_edges(mesh, k, r);
  if (bad.empty()) return;
  std::string list;
  for (int e : bad) list += (list.empty() ? "" : ", ") + mesh.edge_key(e);
  fail(code, "k = " + std::to_string(k) + " is below the separability of edges " + list);
}

}  // namespace

BasisSet full_basis(const QuadMesh& mesh, int k, int r) {
  const SplineLayout lay(k, r, mesh.num_faces());
  require_structured(lay);
  require_separable(mesh, k, r, "SeparabilityNotReached");
  BasisSet out;
  out.layout = lay;
  std::vector<int> verts, edges;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (has_interior_edge(mesh, v)) verts.push_back(v);
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges[e].interior()) edges.push_back(e);
  }
  const int nv = static_cast<int>(verts.size()), ne = static_cast<int>(edges.size());
  std::vector<std::vector<SplineFunction>> parts(nv + ne);
  parallel_for(nv + ne, [&](int t) {
    parts[t] = t < nv ? vertex_basis(mesh, verts[t], k, r) : edge_basis(mesh, edges[t - nv], k, r);
  });
  for (int t = 0; t < nv + ne; ++t) {
    const std::string tag = t < nv ? "vertex:" + std::to_string(mesh.vertices[verts[t]].id)
                                   : "edge:" + mesh.edge_key(edges[t - nv]);
    for (auto& f : parts[t]) {
      out.functions.push_back(std::move(f));
      out.tags.push_back(tag);
    }
  }
  for (int face = 0; face < mesh.num_faces(); ++face) {
    for (auto& f : face_basis(mesh, face, k, r)) {
      out.functions.push_back(std::move(f));
      out.tags.push_back("face:" + std::to_string(face));
    }
  }
  for (int idx : free_slots(mesh, lay)) {
    out.functions.push_back({lay, {{idx, Rational(1)}}});
    out.tags.emplace_back("free");
  }
  return out;
}

// ---------------------------------------------------------------- dimensions

int oracle_dimension(const QuadMesh& mesh, int k, int r) {
  const SplineLayout lay(k, r, mesh.num_faces());
  std::vector<int> edges;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges[e].interior()) edges.push_back(e);
  }
  std::vector<std::vector<SparseRow>> blocks(edges.size());
  parallel_for(static_cast<int>(edges.size()), [&](int i) { blocks[i] = edge_constraint_rows(mesh, edges[i], lay); });
  RowEchelon ech(lay.total(), false);
  for (const auto& blk : blocks) {
    for (const auto& row : blk) ech.add(row);
  }
  return lay.total() - ech.rank();
}

DimensionReport components_dimension(const QuadMesh& mesh, int k, int r) {
  const SplineLayout lay(k, r, mesh.num_faces());
  require_structured(lay);
  require_separable(mesh, k, r, "RangeViolation");
  DimensionReport rep;
  std::vector<int> verts, edges;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (has_interior_edge(mesh, v)) verts.push_back(v);
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges[e].interior()) edges.push_back(e);
  }
  const int nv = static_cast<int>(verts.size()), ne = static_cast<int>(edges.size());
  std::vector<int> dims(nv + ne);
  parallel_for(nv + ne, [&](int t) {
    if (t < nv) {
      dims[t] = h_space(mesh, verts[t], k, r).dimension;
    } else {
      const ThetaSystem sys = theta_system(mesh, edges[t - nv], lay);
      dims[t] = static_cast<int>(sys.images.size()) - rank(sys.jets, static_cast<int>(sys.images.size()));
    }
  });
  for (int t = 0; t < nv; ++t) {
    rep.per_vertex[verts[t]] = dims[t];
    rep.vertex += dims[t];
  }
  for (int t = 0; t < ne; ++t) {
    rep.per_edge[edges[t - 0]] = dims[nv + t];
    rep.edge += dims[nv + t];
  }
  const int inner = std::max(0, lay.m - 3);
  rep.face_interior = inner * inner * mesh.num_faces();
  rep.free_boundary = static_cast<int>(free_slots(mesh, lay).size());
  rep.face = rep.face_interior + rep.free_boundary;
  rep.total = rep.vertex + rep.edge + rep.face;
  return rep;
}

int formula_dimension(const QuadMesh& mesh, int k, int r) {
  if (!mesh.closed()) {
    fail("FormulaNotApplicable", "the closed-form dimension is only used on meshes without boundary");
  }
  const SplineLayout lay(k, r, mesh.num_faces());
  require_separable(mesh, k, r, "RangeViolation");
  const int inner = std::max(0, lay.m - 3);
  int total = inner * inner * mesh.num_faces();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const GluingTriple& g = gluing_of(mesh, e);
    total += spline_syz_dim(g, k, r) + delta_tau(g);
  }
  int f0 = 0;
  for (const auto& st : mesh.stars) f0 += st.faces.empty() ? 0 : 1;
  total += 4 * mesh.num_faces() - 9 * mesh.num_edges() + 3 * f0 + classify(mesh).total_crossing_vertices;
  return total;
}

int dimension(const QuadMesh& mesh, int k, int r, DimensionMethod method) {
  switch (method) {
    case DimensionMethod::Formula:
      return formula_dimension(mesh, k, r);
    case DimensionMethod::Components:
      return components_dimension(mesh, k, r).total;
    case DimensionMethod::Oracle:
      return oracle_dimension(mesh, k, r);
  }
  return 0;
}

BasisCheck check_basis(const QuadMesh& mesh, const BasisSet& basis) {
  const SplineLayout& lay = basis.layout;
  BasisCheck chk;
  RowEchelon ech(lay.total(), false);
  for (const auto& f : basis.functions) ech.add(f.coeffs);
  chk.rank = ech.rank();
  chk.independent = chk.rank == basis.size();
  std::vector<SparseRow> rows;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edges[e].interior()) continue;
    auto blk = edge_constraint_rows(mesh, e, lay);
    rows.insert(rows.end(), blk.begin(), blk.end());
  }
  std::atomic<bool> residual_ok{true};
  parallel_for(basis.size(), [&](int i) {
    for (const auto& row : rows) {
      if (sgn(dot(row, basis.functions[i].coeffs)) != 0) {
        residual_ok = false;
        return;
      }
    }
  });
  chk.zero_residual = residual_ok;
  std::set<int> corners;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    for (int face : mesh.stars[v].faces) {
      for (int idx : corner_block(mesh, lay, face, v)) corners.insert(idx);
    }
  }
  chk.edge_jets_zero = true;
  for (int i = 0; i < basis.size(); ++i) {
    if (basis.tags[i].rfind("edge:", 0) != 0) continue;
    for (const auto& [c, v] : basis.functions[i].coeffs) {
      if (corners.count(c)) chk.edge_jets_zero = false;
    }
  }
  return chk;
}

bool in_span(const BasisSet& basis, const SplineFunction& f) {
  RowEchelon ech(basis.layout.total(), false);
  for (const auto& g : basis.functions) ech.add(g.coeffs);
  return ech.contains(f.coeffs);
}

}  // namespace g1s
