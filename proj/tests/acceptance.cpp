// Acceptance runner: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "g1s/error.hpp"
#include "g1s/g1basis.hpp"
#include "g1s/surf.hpp"
#include "oracles.hpp"
#include "printed_functions.hpp"

using namespace g1s;
using namespace g1s::testing;

namespace {

const std::string kData = G1S_DATA_DIR;

QuadMesh load(const std::string& name) { return load_mesh(kData + "/" + name + ".qmesh.json"); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ------------------------------------------------------------ criterion 1

Outcome corner_dimension() {
  const auto t0 = std::chrono::steady_clock::now();
  const QuadMesh m = load("fan3");
  const int oracle = oracle_dimension(m, 4, 1);
  const DimensionReport rep = components_dimension(m, 4, 1);
  const int gamma = m.vertex_index(0);
  bool shape = rep.per_vertex.at(gamma) == 6;
  for (int id : {1, 2, 3}) shape = shape && rep.per_vertex.at(m.vertex_index(id)) == 4;
  for (int id : {4, 5, 6}) {
    const auto it = rep.per_vertex.find(m.vertex_index(id));
    shape = shape && (it == rep.per_vertex.end() || it->second == 0);
  }
  int interior_edges = 0;
  for (const auto& [e, d] : rep.per_edge) {
    if (!m.edges[e].interior()) continue;
    ++interior_edges;
    shape = shape && d == 5;
  }
  shape = shape && interior_edges == 3 && rep.face == 3 * 36;
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "oracle=" << oracle << " components=" << rep.total << " gamma=" << rep.per_vertex.at(gamma)
     << " edge=" << rep.edge << " face=" << rep.face << " time=" << secs << "s";
  return {oracle == 141 && rep.total == 141 && shape && secs < 30, os.str()};
}

// ------------------------------------------------------------ criterion 2

Outcome corner_syzygies() {
  const QuadMesh m = load("fan3");
  const int e = m.edge_between(m.vertex_index(0), m.vertex_index(1));
  const GluingTriple& g = *m.edges[e].gluing;
  const MuBasis m1 = mu_basis(piece_triple(g, 0)), m2 = mu_basis(piece_triple(g, 1));
  const int d = spline_syz_dim(g, 4, 1);
  const int delta = delta_tau(g);
  const int exact_relaxed = brute_force_syz_dim(g, 4, 0, 1, 1);
  const int structured = static_cast<int>(relaxed_syzygy_basis(g, 4, 1).size());
  const int sep_k = separability_degree(m, e, 1, 2, 8);
  const int bound = separability_bound(g, 1);
  std::ostringstream os;
  os << "mu/nu=(" << m1.mu << "," << m1.nu << ")/(" << m2.mu << "," << m2.nu << ") d_tau=" << d
     << " delta=" << delta << " relaxed=" << d + delta << " exact_relaxed_syz=" << exact_relaxed
     << " relaxed_basis=" << structured << " separable_from_k=" << sep_k << " bound=" << bound;
  const bool pass = m1.mu == 0 && m1.nu == 2 && m2.mu == 0 && m2.nu == 0 && d == 13 && delta == 1 &&
                    d + delta == 14 && structured == exact_relaxed && sep_k == 4 && sep_k <= bound;
  return {pass, os.str()};
}

// ------------------------------------------------------------ criterion 3

Outcome printed_basis_functions() {
  const QuadMesh m = load("fan3");
  const BasisSet basis = full_basis(m, 4, 1);
  int ok = 0, total = 0;
  std::string failed;
  for (const auto& p : printed::printed_functions()) {
    ++total;
    const SplineFunction f = printed::to_function(p, basis.layout);
    bool zero = !f.is_zero();
    for (const auto& [edge, res] : g1_residual(m, f)) zero = zero && res.is_zero();
    if (zero && in_span(basis, f)) {
      ++ok;
    } else {
      failed += (failed.empty() ? "" : ",") + p.name;
    }
  }
  std::ostringstream os;
  os << ok << "/" << total << " printed functions are G1 members of the " << basis.size() << "-dim space";
  if (!failed.empty()) os << "; failing as printed: " << failed;
  return {ok == total, os.str()};
}

// ------------------------------------------------------------ criterion 4

Outcome linear_gluing() {
  const QuadMesh m = load("fan3_linear");
  bool linear = m.gluing.mode == GluingMode::Explicit;
  for (const auto& e : m.edges) {
    if (!e.interior()) continue;
    const GluingTriple& g = *e.gluing;
    linear = linear && g.a.left() == Poly({Rational(-1), Rational(1)}) && g.a.right() == g.a.left();
    linear = linear && g.b == UniSpline::constant(-1, 1) && g.c == UniSpline::constant(1, 1);
  }
  const int oracle = oracle_dimension(m, 3, 1);
  std::ostringstream os;
  os << "explicit a=u-1, b=-1, c=1: oracle(k=3,r=1)=" << oracle;
  return {linear && oracle == 72, os.str()};
}

// ------------------------------------------------------------ criterion 5

Outcome syzygy_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(2024);
  int poly_cases = 0, poly_bad = 0;
  while (poly_cases < 200) {
    const int n = 1 + rng() % 4;
    const Poly a = random_poly(rng, n), b = random_poly(rng, n), c = random_poly(rng, n);
    PolyTriple t;
    try {
      t = PolyTriple::make(a, b, c);
    } catch (const Error&) {
      continue;
    }
    ++poly_cases;
    const MuBasis mb = mu_basis(t);
    bool good = mb.mu + mb.nu == t.n;
    for (int k = 0; k <= t.n + 4; ++k) good = good && poly_syz_dim(t, k) == poly_syz_oracle(a, b, c, k);
    poly_bad += good ? 0 : 1;
  }
  int spline_cases = 0, spline_bad = 0, identity_checks = 0;
  while (spline_cases < 50) {
    const int l = 1 + rng() % 3;
    const int s = rng() % std::min(3, l);
    GluingTriple g;
    try {
      g = GluingTriple::make(random_spline(rng, l, s), random_spline(rng, l, s), random_spline(rng, l, s));
      piece_triple(g, 0);
      piece_triple(g, 1);
    } catch (const Error&) {
      continue;
    }
    ++spline_cases;
    bool good = true;
    const PolyTriple t1 = piece_triple(g, 0), t2 = piece_triple(g, 1);
    for (int r = 0; r <= s; ++r) {
      const int k0 = std::max(std::min(t1.n, t2.n) + r, r + 1);
      for (int k = k0; k < k0 + 5; ++k) {
        const int d = spline_syz_dim(g, k, r);
        good = good && d == brute_force_syz_dim(g, k, r, r, r);
        if (r >= 1) good = good && d + delta_tau(g) == brute_force_syz_dim(g, k, r - 1, r, r);
        if (k >= t1.n + r) {
          ++identity_checks;
          const int z = poly_syz_oracle(t1.a, t1.b, t1.c, k) + poly_syz_oracle(t2.a, t2.b, t2.c, k);
          const int q = quotient_dim(r, k - 1) + 2 * quotient_dim(r, k) - quotient_dim(r, t1.n + k);
          good = good && brute_force_syz_dim(g, k, r, r, r) == z - q;
        }
      }
    }
    spline_bad += good ? 0 : 1;
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "poly " << poly_cases - poly_bad << "/" << poly_cases << ", spline " << spline_cases - spline_bad << "/"
     << spline_cases << " (" << identity_checks << " exact-sequence checks), time=" << secs << "s";
  return {poly_bad == 0 && spline_bad == 0 && identity_checks > 0 && secs < 300, os.str()};
}

// ------------------------------------------------------------ criterion 6

Outcome cube_formula() {
  const QuadMesh cube = load("cube");
  bool pass = true;
  std::ostringstream os;
  for (int r : {0, 1}) {
    int s_star = 0;
    for (int e = 0; e < cube.num_edges(); ++e) s_star = std::max(s_star, separability_degree(cube, e, r, r + 1, 12));
    pass = pass && s_star > 0;
    for (int k : {s_star, s_star + 1}) {
      const int f = formula_dimension(cube, k, r);
      const int c = components_dimension(cube, k, r).total;
      const int o = oracle_dimension(cube, k, r);
      pass = pass && f == c && c == o;
      os << "r=" << r << ",k=" << k << ":" << f << "/" << c << "/" << o << " ";
    }
  }
  os << "(formula/components/oracle)";
  return {pass, os.str()};
}

// ------------------------------------------------------------ criterion 7

Outcome basis_validity() {
  struct Case {
    const char* mesh;
    int k, r;
  };
  bool pass = true;
  std::ostringstream os;
  for (const Case& c : {Case{"fan3", 4, 1}, Case{"quad", 3, 1}, Case{"cube", 4, 0}, Case{"cube", 4, 1},
                        Case{"grid3x3", 4, 1}, Case{"fan5", 4, 1}, Case{"fan3_linear", 3, 1}}) {
    const QuadMesh m = load(c.mesh);
    const BasisSet basis = full_basis(m, c.k, c.r);
    const BasisCheck chk = check_basis(m, basis);
    const int oracle = oracle_dimension(m, c.k, c.r);
    bool pointwise = true;
    for (const auto& f : basis.functions) pointwise = pointwise && pointwise_g1(m, f);
    const bool ok = chk.independent && chk.zero_residual && chk.edge_jets_zero && pointwise && basis.size() == oracle;
    pass = pass && ok;
    os << c.mesh << "(" << c.k << "," << c.r << ")=" << basis.size() << (ok ? "" : "!") << " ";
  }
  return {pass, os.str()};
}

// ------------------------------------------------------------ criterion 8

// Random continuous net on the 3-fan: a random quadratic height field over the
// bilinear net (shared boundary control points coincide) plus independent
// random bumps on interior control points, which breaks G1.
ControlNet random_g0_net(const QuadMesh& mesh, const SplineLayout& lay, std::mt19937& rng) {
  std::uniform_real_distribution<double> w(-1, 1);
  ControlNet net = bilinear_net(mesh, lay);
  const double c[6] = {w(rng), w(rng), w(rng), w(rng), w(rng), w(rng)};
  for (auto& p : net.points) {
    const double x = p[0], y = p[1];
    p[2] = c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
  }
  for (int f = 0; f < lay.num_faces; ++f) {
    for (int i = 1; i < lay.m; ++i) {
      for (int j = 1; j < lay.m; ++j) net.at(f, i, j)[2] += 0.3 * w(rng);
    }
  }
  return net;
}

Outcome fitting() {
  const auto t0 = std::chrono::steady_clock::now();
  const QuadMesh m = load("fan3");
  const BasisSet basis = full_basis(m, 4, 1);
  std::mt19937 rng(99);
  const ControlNet target = random_g0_net(m, basis.layout, rng);
  ParametricSurface raw;
  raw.net = target;
  const double before = max_g1_residual(m, raw, 33);
  const Projection once = project_g1(target, basis);
  const double after = max_g1_residual(m, once.surface, 33);
  const Projection twice = project_g1(once.surface.net, basis);
  double moved = 0, scale = 0;
  for (std::size_t i = 0; i < once.surface.net.points.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      moved = std::max(moved, std::abs(once.surface.net.points[i][c] - twice.surface.net.points[i][c]));
      scale = std::max(scale, std::abs(once.surface.net.points[i][c]));
    }
  }
  const double idem = moved / std::max(scale, 1.0);

  // Crack check: the exported sampled mesh merges every shared sample, and the
  // two faces agree at the merged points.
  const int n = 16;
  ExportStats st;
  const std::string obj = export_surface(m, once.surface, ExportMode::SampledObj, n, &st);
  const int expected_merged = 3 * (n - 1) + 3 + 2;
  double gap = 0;
  for (int e = 0; e < m.num_edges(); ++e) {
    if (!m.edges[e].interior()) continue;
    const CornerFrame s1 = m.sigma1_frame(e), s0 = m.sigma0_frame(e);
    for (int p = 0; p <= n; ++p) {
      const auto [i1, j1] = s1.to_native(p, 0, n);
      const auto [i0, j0] = s0.to_native(0, p, n);
      const Vec3 a = eval(once.surface, s1.face, double(i1) / n, double(j1) / n);
      const Vec3 b = eval(once.surface, s0.face, double(i0) / n, double(j0) / n);
      for (int c = 0; c < 3; ++c) gap = std::max(gap, std::abs(a[c] - b[c]));
    }
  }
  const bool crack_free = st.merged == expected_merged && gap < 1e-12 &&
                          st.vertices == m.num_faces() * (n + 1) * (n + 1) - expected_merged && !obj.empty();
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "G1 residual " << before << " -> " << after << ", idempotence " << idem << ", export merged=" << st.merged
     << " gap=" << gap << ", time=" << secs << "s";
  return {before > 1e-3 && after < 1e-9 && idem < 1e-12 && crack_free && secs < 60, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 corner mesh dimension 141", corner_dimension},
      {"2 corner mu-basis and relaxed syzygies", corner_syzygies},
      {"3 printed corner basis functions", printed_basis_functions},
      {"4 linear gluing dimension 72", linear_gluing},
      {"5 syzygy property suite", syzygy_suite},
      {"6 closed-mesh formula agreement", cube_formula},
      {"7 basis validity", basis_validity},
      {"8 G1 fitting", fitting},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << o.detail << "]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
