#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "g1s/error.hpp"
#include "g1s/poly.hpp"

using namespace g1s;

namespace {

Poly P(std::initializer_list<int> c) {
  std::vector<Rational> v;
  for (int x : c) v.emplace_back(x);
  return Poly(v);
}

// Cox-de Boor recursion on the knot vector [0^{k+1}, (1/2)^{k-r}, 1^{k+1}],
// evaluated pointwise with right-continuous intervals (left piece at 1/2 only
// matters through continuity, so points avoid 1/2 and 1).
Rational de_boor(int i, int deg, const std::vector<Rational>& t, const Rational& u) {
  if (deg == 0) return (t[i] <= u && u < t[i + 1]) ? Rational(1) : Rational(0);
  Rational acc = 0;
  if (t[i + deg] != t[i]) acc += (u - t[i]) / (t[i + deg] - t[i]) * de_boor(i, deg - 1, t, u);
  if (t[i + deg + 1] != t[i + 1]) acc += (t[i + deg + 1] - u) / (t[i + deg + 1] - t[i + 1]) * de_boor(i + 1, deg - 1, t, u);
  return acc;
}

std::vector<Rational> knots(int k, int r) {
  std::vector<Rational> t(k + 1, Rational(0));
  for (int i = 0; i < k - r; ++i) t.emplace_back(1, 2);
  for (int i = 0; i <= k; ++i) t.emplace_back(1);
  return t;
}

}  // namespace

TEST_CASE("polynomial arithmetic and evaluation") {
  const Poly a = P({1, 2, 3});  // 1 + 2u + 3u^2
  CHECK(a.degree() == 2);
  CHECK(a(Rational(2)) == 17);
  CHECK(a.derivative() == P({2, 6}));
  CHECK(a.antiderivative() == Poly({Rational(0), Rational(1), Rational(1), Rational(1)}));
  CHECK((a * P({0, 1})) == P({0, 1, 2, 3}));
  CHECK((a - a).is_zero());
  CHECK(Poly().degree() == kMinusInfinity);
  CHECK(P({-1, 2}).pow(3) == knot_factor(3));
}

TEST_CASE("division, gcd and extended gcd") {
  const Poly a = P({-1, 0, 1});  // (u-1)(u+1)
  const Poly b = P({-1, 1});
  const auto [q, r] = Poly::divmod(a, b);
  CHECK(q == P({1, 1}));
  CHECK(r.is_zero());
  const auto [q0, r0] = Poly::divmod(Poly(), b);
  CHECK(q0.is_zero());
  CHECK(r0.is_zero());
  CHECK(Poly::gcd(a, P({2, 2})) == P({1, 1}));
  const auto eg = Poly::ext_gcd(P({1, 0, 1}), P({0, 1}));
  CHECK(eg.g == P({1}));
  CHECK(eg.s * P({1, 0, 1}) + eg.t * P({0, 1}) == eg.g);
  CHECK_THROWS_AS(Poly::gcd(Poly(), Poly()), Error);
  CHECK_THROWS_AS(Poly::divmod(a, Poly()), Error);
}

TEST_CASE("random extended gcd identities") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> x(1 + rng() % 5), y(1 + rng() % 5);
    for (auto& v : x) v = c(rng);
    for (auto& v : y) v = c(rng);
    const Poly a(x), b(y);
    if (a.is_zero() && b.is_zero()) continue;
    const auto eg = Poly::ext_gcd(a, b);
    CHECK(eg.s * a + eg.t * b == eg.g);
    if (!a.is_zero()) CHECK(Poly::divmod(a, eg.g).second.is_zero());
    if (!b.is_zero()) CHECK(Poly::divmod(b, eg.g).second.is_zero());
  }
}

TEST_CASE("spline construction enforces smoothness and degree") {
  const Poly left = P({0, 0, 1});
  CHECK_NOTHROW(UniSpline::make(left, left, 2, 2));
  // (2u-1)^2 jump: C^1 but not C^2.
  const Poly right = left + knot_factor(2);
  CHECK_NOTHROW(UniSpline::make(left, right, 1, 2));
  CHECK(UniSpline::make(left, right, 1, 2).actual_regularity() == 1);
  CHECK_THROWS_AS(UniSpline::make(left, right, 2, 2), Error);
  CHECK_THROWS_AS(UniSpline::make(P({0, 0, 0, 1}), P({0, 0, 0, 1}), 0, 2), Error);
  const UniSpline s = UniSpline::make(left, right, 1, 2);
  CHECK(s.reflect().left() == right.compose_affine(Rational(-1), Rational(1)));
}

TEST_CASE("B-spline basis matches an independent de Boor evaluation") {
  for (int k = 1; k <= 5; ++k) {
    for (int r = -1; r < k; ++r) {
      if (r < 0) continue;
      const BSplineBasis& b = bspline_basis(k, r);
      CHECK(b.m() == 2 * k - r);
      const auto t = knots(k, r);
      for (const Rational u : {Rational(0), Rational(1, 7), Rational(1, 3), Rational(3, 5), Rational(9, 10)}) {
        Rational sum = 0;
        for (int i = 0; i <= b.m(); ++i) {
          CHECK(b.value(i, u) == de_boor(i, k, t, u));
          sum += b.value(i, u);
        }
        CHECK(sum == 1);
      }
      for (int i = 0; i <= b.m(); ++i) CHECK(b.function(i).actual_regularity() >= r);
    }
  }
}

TEST_CASE("B-spline coefficient round trip and end derivatives") {
  const BSplineBasis& b = bspline_basis(4, 1);
  std::vector<Rational> c;
  for (int i = 0; i <= b.m(); ++i) c.push_back(Rational(i * i - 3) / (i + 1));
  const UniSpline f = b.from_bspline(c);
  CHECK(b.to_bspline(f) == c);
  // N_1'(0) = k / (1/2) on this knot vector.
  CHECK(b.derivative_at_zero(1, 1) == 8);
  CHECK(b.derivative_at_zero(0, 1) == -8);
  CHECK(b.derivative_at_zero(3, 1) == 0);
  CHECK_THROWS_AS(BSplineBasis(2, 2), Error);
}

TEST_CASE("Hermite blends interpolate the end values with flat ends") {
  const auto [d0, d1] = hermite_blends(2, 0);
  CHECK(d0(Rational(0)) == 1);
  CHECK(d0(Rational(1)) == 0);
  CHECK(d1(Rational(1)) == 1);
  CHECK(d0.derivative()(Rational(0)) == 0);
  CHECK(d1.derivative()(Rational(1)) == 0);
  CHECK((d0 + d1) == UniSpline::constant(1, 2));
  // Left piece of d0 for (l, s) = (2, 0) is 1 - 4u^2.
  CHECK(d0.left() == P({1, 0, -4}));
  CHECK(d0.right().is_zero());
  CHECK_THROWS_AS(hermite_blends(1, 0), Error);
}

TEST_CASE("rational parsing and printing") {
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK(to_string(Rational(-3) / 6) == "-1/2");
  CHECK(parse_rational("010") == 10);
  CHECK(parse_rational("-3/06") == Rational(-1, 2));
  CHECK(parse_rational("7/14") == Rational(1, 2));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("5") == 5);
  CHECK_THROWS_AS(parse_rational("x"), Error);
}
