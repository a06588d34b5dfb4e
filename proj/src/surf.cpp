#include "g1s/surf.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "g1s/error.hpp"

namespace g1s {

namespace {

using json = nlohmann::json;

// Double-precision monomial pieces of N_i and N_i' for fast evaluation.
class DoubleBasis {
 public:
  DoubleBasis(int k, int r) {
    const BSplineBasis& b = bspline_basis(k, r);
    m_ = b.m();
    for (int i = 0; i <= m_; ++i) {
      for (int p = 0; p < 2; ++p) {
        f_[p].push_back(to_doubles(b.piece(i, p)));
        df_[p].push_back(to_doubles(b.derivative_piece(i, p)));
      }
    }
  }

  int m() const { return m_; }
  double value(int i, double u) const { return horner(f_[piece(u)][i], u); }
  double derivative(int i, double u) const { return horner(df_[piece(u)][i], u); }

 private:
  static int piece(double u) { return u <= 0.5 ? 0 : 1; }
  static std::vector<double> to_doubles(const Poly& p) {
    std::vector<double> out;
    for (const auto& c : p.coeffs()) out.push_back(c.get_d());
    return out;
  }
  static double horner(const std::vector<double>& c, double u) {
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
  }
  int m_ = 0;
  std::array<std::vector<std::vector<double>>, 2> f_, df_;
};

const DoubleBasis& double_basis(int k, int r) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<DoubleBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{k, r}];
  if (!slot) slot = std::make_unique<DoubleBasis>(k, r);
  return *slot;
}

void check_param(double u, double v) {
  if (!(u >= 0 && u <= 1 && v >= 0 && v <= 1)) fail("RangeViolation", "surface parameters must lie in [0, 1]");
}

double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

double diameter(const ControlNet& net) {
  if (net.points.empty()) return 0;
  Vec3 lo = net.points.front(), hi = lo;
  for (const auto& p : net.points) {
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  return norm({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
}

}  // namespace

ControlNet ControlNet::zero(const SplineLayout& layout) {
  return {layout, std::vector<Vec3>(layout.total(), Vec3{0, 0, 0})};
}

std::array<Vec3, 3> eval_with_derivatives(const ParametricSurface& s, int face, double u, double v) {
  const SplineLayout& lay = s.layout();
  if (face < 0 || face >= lay.num_faces) fail("RangeViolation", "face index out of range");
  check_param(u, v);
  const DoubleBasis& b = double_basis(lay.k, lay.r);
  std::vector<double> nu(lay.side()), nv(lay.side()), du(lay.side()), dv(lay.side());
  for (int i = 0; i <= lay.m; ++i) {
    nu[i] = b.value(i, u);
    nv[i] = b.value(i, v);
    du[i] = b.derivative(i, u);
    dv[i] = b.derivative(i, v);
  }
  std::array<Vec3, 3> out{};
  for (int i = 0; i <= lay.m; ++i) {
    for (int j = 0; j <= lay.m; ++j) {
      const Vec3& c = s.net.at(face, i, j);
      for (int d = 0; d < 3; ++d) {
        out[0][d] += c[d] * nu[i] * nv[j];
        out[1][d] += c[d] * du[i] * nv[j];
        out[2][d] += c[d] * nu[i] * dv[j];
      }
    }
  }
  return out;
}

Vec3 eval(const ParametricSurface& s, int face, double u, double v) {
  return eval_with_derivatives(s, face, u, v)[0];
}

std::array<Rational, 3> eval_exact(const ParametricSurface& s, int face, const Rational& u, const Rational& v) {
  if (!s.has_exact) fail("DomainError", "surface has no exact coordinates");
  if (u < 0 || u > 1 || v < 0 || v > 1) fail("RangeViolation", "surface parameters must lie in [0, 1]");
  const SplineLayout& lay = s.layout();
  const BSplineBasis& b = bspline_basis(lay.k, lay.r);
  std::array<Rational, 3> out;
  for (int d = 0; d < 3; ++d) {
    for (const auto& [col, c] : s.exact[d].coeffs) {
      if (col / lay.face_size() != face) continue;
      const int local = col % lay.face_size();
      out[d] += c * b.value(local / lay.side(), u) * b.value(local % lay.side(), v);
    }
  }
  return out;
}

// ---------------------------------------------------------------- projection

Projection project_g1(const ControlNet& target, const BasisSet& basis, bool exact) {
  const SplineLayout& lay = basis.layout;
  if (target.layout.k != lay.k || target.layout.r != lay.r || target.layout.num_faces != lay.num_faces ||
      static_cast<int>(target.points.size()) != lay.total()) {
    fail("ShapeMismatch", "target control net does not match the basis layout");
  }
  const int N = lay.total(), n = basis.size();
  Projection out;
  out.surface.net = ControlNet::zero(lay);
  out.weights.assign(n, Vec3{0, 0, 0});
  if (n == 0) {
    for (const auto& p : target.points) out.residual_norm += p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    out.residual_norm = std::sqrt(out.residual_norm);
    return out;
  }
  if (exact) {
    std::vector<SparseRow> gram(n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const Rational g = dot(basis.functions[a].coeffs, basis.functions[b].coeffs);
        if (sgn(g) != 0) gram[a].emplace_back(b, g);
      }
    }
    for (int d = 0; d < 3; ++d) {
      std::vector<Rational> t(N);
      for (int i = 0; i < N; ++i) t[i] = Rational(target.points[i][d]);
      std::vector<Rational> rhs(n);
      for (int a = 0; a < n; ++a) rhs[a] = dot(basis.functions[a].coeffs, t);
      const auto lambda = solve(gram, rhs, n);
      if (!lambda) fail("InternalError", "normal equations are inconsistent");
      SparseRow acc;
      for (int a = 0; a < n; ++a) {
        out.weights[a][d] = (*lambda)[a].get_d();
        if (sgn((*lambda)[a]) != 0) acc = axpy(acc, -(*lambda)[a], basis.functions[a].coeffs);
      }
      out.surface.exact[d] = {lay, acc};
      for (const auto& [col, v] : acc) out.surface.net.points[col][d] = v.get_d();
    }
    out.surface.has_exact = true;
  } else {
    std::vector<Eigen::Triplet<double>> trip;
    for (int a = 0; a < n; ++a) {
      for (const auto& [col, v] : basis.functions[a].coeffs) trip.emplace_back(col, a, v.get_d());
    }
    Eigen::SparseMatrix<double> B(N, n);
    B.setFromTriplets(trip.begin(), trip.end());
    const Eigen::SparseMatrix<double> G = (B.transpose() * B).pruned();
    Eigen::MatrixXd T(N, 3);
    for (int i = 0; i < N; ++i) {
      for (int d = 0; d < 3; ++d) T(i, d) = target.points[i][d];
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(G);
    if (ldlt.info() != Eigen::Success) fail("NumericalError", "normal equations could not be factored");
    const Eigen::VectorXd D = ldlt.vectorD();
    const double dmax = D.cwiseAbs().maxCoeff(), dmin = D.cwiseAbs().minCoeff();
    if (dmin <= 0 || dmax / dmin > 1e12) {
      out.warnings.push_back("normal equations are ill-conditioned (pivot ratio " + std::to_string(dmax / dmin) +
                             "); consider --exact");
    }
    const Eigen::MatrixXd L = ldlt.solve(B.transpose() * T);
    const Eigen::MatrixXd P = B * L;
    for (int a = 0; a < n; ++a) out.weights[a] = {L(a, 0), L(a, 1), L(a, 2)};
    for (int i = 0; i < N; ++i) out.surface.net.points[i] = {P(i, 0), P(i, 1), P(i, 2)};
  }
  double sq = 0;
  for (int i = 0; i < N; ++i) {
    for (int d = 0; d < 3; ++d) {
      const double diff = target.points[i][d] - out.surface.net.points[i][d];
      sq += diff * diff;
    }
  }
  out.residual_norm = std::sqrt(sq);
  return out;
}

double max_g1_residual(const QuadMesh& mesh, const ParametricSurface& s, int samples_per_edge) {
  if (samples_per_edge < 2) fail("RangeViolation", "need at least two samples per edge");
  const SplineLayout& lay = s.layout();
  const DoubleBasis& b = double_basis(lay.k, lay.r);
  const double scale = std::max(diameter(s.net), 1e-300);
  const double n1 = 2.0 * lay.k;
  double worst = 0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edges[e].interior()) continue;
    const GluingTriple& g = *mesh.edges[e].gluing;
    const CornerFrame f1 = mesh.sigma1_frame(e), f0 = mesh.sigma0_frame(e);
    for (int q = 0; q < samples_per_edge; ++q) {
      const double t = static_cast<double>(q) / (samples_per_edge - 1);
      const double a = g.a.eval(t), bb = g.b.eval(t), c = g.c.eval(t);
      Vec3 trace{}, X{}, Y{}, Z{};
      for (int i = 0; i <= lay.m; ++i) {
        const double N = b.value(i, t), dN = b.derivative(i, t);
        const Vec3& c10 = s.net.points[lay.index(f1, i, 0)];
        const Vec3& c11 = s.net.points[lay.index(f1, i, 1)];
        const Vec3& c00 = s.net.points[lay.index(f0, 0, i)];
        const Vec3& c01 = s.net.points[lay.index(f0, 1, i)];
        for (int d = 0; d < 3; ++d) {
          trace[d] += N * (c10[d] - c00[d]);
          X[d] += N * n1 * (c11[d] - c10[d]);
          Y[d] += N * n1 * (c01[d] - c00[d]);
          Z[d] += dN * c00[d];
        }
      }
      Vec3 deriv;
      for (int d = 0; d < 3; ++d) deriv[d] = c * X[d] - bb * Y[d] - a * Z[d];
      const double weight = (std::abs(a) + std::abs(bb) + std::abs(c)) * n1 * scale;
      worst = std::max({worst, norm(trace) / scale, norm(deriv) / weight});
    }
  }
  return worst;
}

// ---------------------------------------------------------------- export

ExportMode parse_export_mode(const std::string& name) {
  if (name == "control_net_obj" || name == "control-net-obj") return ExportMode::ControlNetObj;
  if (name == "sampled_obj" || name == "sampled-obj" || name == "obj") return ExportMode::SampledObj;
  if (name == "sampled_off" || name == "sampled-off" || name == "off") return ExportMode::SampledOff;
  fail("ParseError", "unknown export mode '" + name + "'");
}

std::string export_surface(const QuadMesh& mesh, const ParametricSurface& s, ExportMode mode, int samples,
                           ExportStats* stats) {
  const SplineLayout& lay = s.layout();
  std::vector<Vec3> verts;
  std::vector<std::array<int, 4>> quads;
  ExportStats st;
  if (mode == ExportMode::ControlNetObj) {
    for (int f = 0; f < lay.num_faces; ++f) {
      const int base = static_cast<int>(verts.size());
      for (int i = 0; i <= lay.m; ++i) {
        for (int j = 0; j <= lay.m; ++j) verts.push_back(s.net.at(f, i, j));
      }
      for (int i = 0; i < lay.m; ++i) {
        for (int j = 0; j < lay.m; ++j) {
          const int a = base + i * lay.side() + j;
          quads.push_back({a, a + lay.side(), a + lay.side() + 1, a + 1});
        }
      }
    }
  } else {
    if (samples < 2) fail("RangeViolation", "samples per patch must be at least 2");
    const int S = samples;
    // Shared samples keyed by (kind, id, param): kind 0 vertex, 1 edge.
    std::map<std::tuple<int, int, int>, int> shared;
    const double tol = 1e-12 * std::max(1.0, diameter(s.net));
    for (int f = 0; f < lay.num_faces; ++f) {
      const auto& fv = mesh.faces[f].v;
      std::vector<int> ids((S + 1) * (S + 1));
      for (int i = 0; i <= S; ++i) {
        for (int j = 0; j <= S; ++j) {
          const Vec3 p = eval(s, f, static_cast<double>(i) / S, static_cast<double>(j) / S);
          std::optional<std::tuple<int, int, int>> key;
          auto corner = [&](int c) { key = std::make_tuple(0, fv[c], 0); };
          auto side = [&](int ca, int cb, int t) {
            const int e = mesh.edge_between(fv[ca], fv[cb]);
            const int from_v0 = mesh.edges[e].v0 == fv[ca] ? t : S - t;
            key = std::make_tuple(1, e, from_v0);
          };
          if (i == 0 && j == 0) corner(0);
          else if (i == S && j == 0) corner(1);
          else if (i == S && j == S) corner(2);
          else if (i == 0 && j == S) corner(3);
          else if (j == 0) side(0, 1, i);
          else if (i == S) side(1, 2, j);
          else if (j == S) side(3, 2, i);
          else if (i == 0) side(0, 3, j);
          int id = -1;
          if (key) {
            auto it = shared.find(*key);
            if (it != shared.end()) {
              const Vec3& q = verts[it->second];
              if (norm({p[0] - q[0], p[1] - q[1], p[2] - q[2]}) <= tol) {
                id = it->second;
                ++st.merged;
              }
            }
          }
          if (id < 0) {
            id = static_cast<int>(verts.size());
            verts.push_back(p);
            if (key) shared.emplace(*key, id);
          }
          ids[i * (S + 1) + j] = id;
        }
      }
      for (int i = 0; i < S; ++i) {
        for (int j = 0; j < S; ++j) {
          const int a = i * (S + 1) + j;
          quads.push_back({ids[a], ids[a + S + 1], ids[a + S + 2], ids[a + 1]});
        }
      }
    }
  }
  std::ostringstream os;
  os << std::setprecision(17);
  if (mode == ExportMode::SampledOff) {
    os << "OFF\n" << verts.size() << ' ' << quads.size() << " 0\n";
    for (const auto& v : verts) os << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& q : quads) os << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  } else {
    for (const auto& v : verts) os << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& q : quads) {
      os << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1 << '\n';
    }
  }
  st.vertices = static_cast<int>(verts.size());
  st.faces = static_cast<int>(quads.size());
  if (stats) *stats = st;
  return os.str();
}

// ---------------------------------------------------------------- JSON

std::string control_net_to_json(const ControlNet& net, const std::string& mesh_hash) {
  json doc;
  doc["k"] = net.layout.k;
  doc["r"] = net.layout.r;
  if (!mesh_hash.empty()) doc["mesh_hash"] = mesh_hash;
  json faces = json::object();
  for (int f = 0; f < net.layout.num_faces; ++f) {
    json grid = json::array();
    for (int i = 0; i <= net.layout.m; ++i) {
      json row = json::array();
      for (int j = 0; j <= net.layout.m; ++j) {
        const Vec3& p = net.at(f, i, j);
        row.push_back({p[0], p[1], p[2]});
      }
      grid.push_back(row);
    }
    faces[std::to_string(f)] = grid;
  }
  doc["faces"] = faces;
  return doc.dump(1);
}

ControlNet control_net_from_json(const std::string& text, int num_faces) {
  try {
    const json doc = json::parse(text);
    const SplineLayout lay(doc.at("k").get<int>(), doc.at("r").get<int>(), num_faces);
    if (lay.r < 0 || lay.r >= lay.k) fail("ShapeMismatch", "control net needs 0 <= r < k");
    ControlNet net = ControlNet::zero(lay);
    for (const auto& [key, grid] : doc.at("faces").items()) {
      const int f = std::stoi(key);
      if (f < 0 || f >= num_faces) fail("ShapeMismatch", "control net refers to unknown face " + key);
      if (static_cast<int>(grid.size()) != lay.side()) fail("ShapeMismatch", "control net grid has wrong row count");
      for (int i = 0; i <= lay.m; ++i) {
        if (static_cast<int>(grid[i].size()) != lay.side()) {
          fail("ShapeMismatch", "control net grid has wrong column count");
        }
        for (int j = 0; j <= lay.m; ++j) {
          const auto& p = grid[i][j];
          if (p.size() != 3) fail("ShapeMismatch", "control points need three coordinates");
          net.at(f, i, j) = {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
        }
      }
    }
    return net;
  } catch (const json::exception& ex) {
    fail("ParseError", std::string("control net JSON: ") + ex.what());
  }
}

ControlNet bilinear_net(const QuadMesh& mesh, const SplineLayout& layout) {
  ControlNet net = ControlNet::zero(layout);
  // Greville abscissae of the knot vector.
  const BSplineBasis& b = bspline_basis(layout.k, layout.r);
  std::vector<double> grev(layout.side());
  for (int i = 0; i <= layout.m; ++i) {
    double acc = 0;
    for (int t = 1; t <= layout.k; ++t) acc += b.knots()[i + t].get_d();
    grev[i] = acc / layout.k;
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    std::array<Vec3, 4> c{};
    for (int q = 0; q < 4; ++q) {
      const auto& pos = mesh.vertices[mesh.faces[f].v[q]].position;
      if (pos) c[q] = *pos;
    }
    for (int i = 0; i <= layout.m; ++i) {
      for (int j = 0; j <= layout.m; ++j) {
        const double u = grev[i], v = grev[j];
        for (int d = 0; d < 3; ++d) {
          net.at(f, i, j)[d] = (1 - u) * (1 - v) * c[0][d] + u * (1 - v) * c[1][d] + u * v * c[2][d] +
                               (1 - u) * v * c[3][d];
        }
      }
    }
  }
  return net;
}

}  // namespace g1s
