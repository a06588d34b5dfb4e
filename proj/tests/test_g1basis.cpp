#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "g1s/error.hpp"
#include "g1s/g1basis.hpp"
#include "oracles.hpp"

using namespace g1s;
using g1s::testing::pointwise_g1;

namespace {

const std::string kData = G1S_DATA_DIR;

QuadMesh load(const std::string& name) { return load_mesh(kData + "/" + name + ".qmesh.json"); }

SplineFunction constant_function(const SplineLayout& lay, const Rational& value) {
  SplineFunction f;
  f.layout = lay;
  for (int i = 0; i < lay.total(); ++i) f.coeffs.push_back({i, value});
  return f;
}

}  // namespace

TEST_CASE("components count agrees with the exact nullspace") {
  struct Case {
    const char* name;
    int k, r, expected;
  };
  for (const Case& c : {Case{"fan3", 4, 1, 141}, Case{"grid3x3", 3, 1, 196}, Case{"grid3x3", 4, 1, 400},
                        Case{"fan5", 4, 1, 220}, Case{"cube", 4, 1, 192}, Case{"cube", 4, 0, 270}}) {
    CAPTURE(c.name);
    CAPTURE(c.k);
    CAPTURE(c.r);
    const QuadMesh m = load(c.name);
    const int oracle = oracle_dimension(m, c.k, c.r);
    CHECK(oracle == c.expected);
    const DimensionReport rep = components_dimension(m, c.k, c.r);
    CHECK(rep.total == oracle);
    CHECK(rep.vertex + rep.edge + rep.face == rep.total);
    CHECK(rep.face == rep.face_interior + rep.free_boundary);
  }
}

TEST_CASE("closed formula on the cube and its domain") {
  const QuadMesh cube = load("cube");
  CHECK(formula_dimension(cube, 4, 1) == 192);
  CHECK(formula_dimension(cube, 5, 0) == 462);
  try {
    formula_dimension(load("fan3"), 4, 1);
    FAIL("boundary mesh accepted");
  } catch (const Error& e) {
    CHECK(e.code() == "FormulaNotApplicable");
  }
}

TEST_CASE("separability of the corner example edge") {
  const QuadMesh m = load("fan3");
  const int e = m.edge_between(m.vertex_index(0), m.vertex_index(1));
  CHECK(separability(m, e, 4, 1).separable);
  const SeparabilityReport low = separability(m, e, 3, 1);
  CHECK_FALSE(low.separable);
  CHECK(low.rank < low.required);
  CHECK(separability_degree(m, e, 1, 2, 6) == 4);
  CHECK(separability_bound(*m.edges[e].gluing, 1) >= 4);
}

TEST_CASE("full basis of the corner example") {
  const QuadMesh m = load("fan3");
  const BasisSet basis = full_basis(m, 4, 1);
  CHECK(basis.size() == 141);
  const auto counts = basis.counts_by_kind();
  CHECK(counts.at("vertex") == 18);
  CHECK(counts.at("edge") == 15);
  CHECK(counts.at("face") + counts.at("free") == 108);
  const BasisCheck chk = check_basis(m, basis);
  CHECK(chk.independent);
  CHECK(chk.zero_residual);
  CHECK(chk.edge_jets_zero);
  CHECK(chk.rank == 141);
  int pointwise = 0;
  for (const auto& f : basis.functions) pointwise += pointwise_g1(m, f) ? 1 : 0;
  CHECK(pointwise == basis.size());
  // Constants are G1 and must lie in the span.
  CHECK(in_span(basis, constant_function(basis.layout, 3)));
  // A single interior boundary-row coefficient breaks the trace condition.
  const int e = m.edge_between(m.vertex_index(0), m.vertex_index(1));
  const CornerFrame fr = m.sigma1_frame(e);
  SplineFunction bump;
  bump.layout = basis.layout;
  bump.coeffs.push_back({basis.layout.index(fr, 3, 0), Rational(1)});
  CHECK_FALSE(pointwise_g1(m, bump));
  CHECK_FALSE(in_span(basis, bump));
}

TEST_CASE("random combinations of basis functions stay G1") {
  const QuadMesh m = load("cube");
  const BasisSet basis = full_basis(m, 4, 1);
  REQUIRE(basis.size() == 192);
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> pick(0, basis.size() - 1), w(-5, 5);
  for (int trial = 0; trial < 5; ++trial) {
    std::map<int, Rational> acc;
    for (int t = 0; t < 6; ++t) {
      const Rational s = w(rng);
      for (const auto& [i, v] : basis.functions[pick(rng)].coeffs) acc[i] += s * v;
    }
    SplineFunction f;
    f.layout = basis.layout;
    for (const auto& [i, v] : acc) {
      if (sgn(v) != 0) f.coeffs.push_back({i, v});
    }
    CHECK(pointwise_g1(m, f));
    for (const auto& [edge, res] : g1_residual(m, f)) CHECK(res.is_zero());
  }
}

TEST_CASE("worker count honours the environment") {
  CHECK(worker_count() >= 1);
}
