#include "g1s/syzygy.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "g1s/error.hpp"

namespace g1s {

namespace {

const Rational kHalf(1, 2);

SyzVector scale(const SyzVector& v, const Poly& f) { return {v[0] * f, v[1] * f, v[2] * f}; }

SyzVector add(const SyzVector& x, const SyzVector& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2]}; }

// Truncated Taylor expansion at 1/2: the remainder of p modulo (2u-1)^n.
Poly mod_knot_factor(const Poly& p, int n) {
  if (n <= 0) return {};
  return Poly::divmod(p, knot_factor(n)).second;
}

// Monomial coefficient vector of a polynomial triple of degree <= d.
std::vector<Rational> flatten(const SyzVector& v, int d) {
  std::vector<Rational> x(3 * (d + 1));
  for (int c = 0; c < 3; ++c) {
    for (int e = 0; e <= d; ++e) x[c * (d + 1) + e] = v[c].coeff(e);
  }
  return x;
}

// Rows of (A,B,C) -> A a + B b + C c for deg A, B, C <= d.
std::vector<SparseRow> syzygy_rows(const PolyTriple& t, int d) {
  const std::array<const Poly*, 3> comps{&t.a, &t.b, &t.c};
  const int top = d + t.n;
  std::vector<std::vector<Rational>> rows(top + 1, std::vector<Rational>(3 * (d + 1)));
  for (int c = 0; c < 3; ++c) {
    const auto& cf = comps[c]->coeffs();
    for (int e = 0; e <= d; ++e) {
      for (std::size_t j = 0; j < cf.size(); ++j) rows[e + j][c * (d + 1) + e] += cf[j];
    }
  }
  std::vector<SparseRow> out;
  for (auto& r : rows) out.push_back(make_sparse(r));
  return out;
}

SyzVector unflatten(const SparseRow& x, int d) {
  std::vector<std::vector<Rational>> comps(3, std::vector<Rational>(d + 1));
  for (const auto& [col, v] : x) comps[col / (d + 1)][col % (d + 1)] = v;
  return {Poly(comps[0]), Poly(comps[1]), Poly(comps[2])};
}

}  // namespace

// ---------------------------------------------------------------- GluingTriple

GluingTriple GluingTriple::make(UniSpline a, UniSpline b, UniSpline c) {
  if (sgn(c(Rational(0))) == 0 || sgn(c(Rational(1))) == 0) {
    fail("DegenerateGluing", "gluing denominator c must not vanish at the edge ends");
  }
  return GluingTriple{std::move(a), std::move(b), std::move(c)};
}

int GluingTriple::regularity() const {
  return std::min({a.actual_regularity(), b.actual_regularity(), c.actual_regularity()});
}

// ---------------------------------------------------------------- polynomial syzygies

PolyTriple PolyTriple::make(Poly a, Poly b, Poly c) {
  if (a.is_zero() && b.is_zero() && c.is_zero()) fail("DomainError", "zero polynomial triple");
  if (c.is_zero()) fail("GcdViolation", "c = 0 gives gcd(a, c) != 1");
  if (Poly::gcd(a, c).degree() != 0 || Poly::gcd(b, c).degree() != 0) {
    fail("GcdViolation", "gcd(a,c) = gcd(b,c) = 1 fails for (" + a.str() + ", " + b.str() + ", " + c.str() + ")");
  }
  PolyTriple t{std::move(a), std::move(b), std::move(c), 0};
  t.n = std::max({t.a.degree(), t.b.degree(), t.c.degree()});
  return t;
}

PolyTriple piece_triple(const GluingTriple& g, int p) {
  return PolyTriple::make(g.a.piece(p), g.b.piece(p), g.c.piece(p));
}

int e_flag(const PolyTriple& t) {
  // A zero component contributes +infinity and drops out of the minimum.
  int m = std::numeric_limits<int>::max();
  if (!t.a.is_zero()) m = std::min(m, t.n + 1 - t.a.degree());
  if (!t.b.is_zero()) m = std::min(m, t.n - t.b.degree());
  if (!t.c.is_zero()) m = std::min(m, t.n - t.c.degree());
  return m == 0 ? 0 : 1;
}

MuBasis mu_basis(const PolyTriple& t) {
  MuBasis mb;
  mb.n = t.n;
  mb.e = e_flag(t);
  std::optional<SyzVector> p;
  for (int d = 0; d <= t.n + 1; ++d) {
    const int ncols = 3 * (d + 1);
    const auto null = nullspace(syzygy_rows(t, d), ncols);
    if (!p) {
      if (null.empty()) continue;
      p = unflatten(null.front(), d);
      mb.mu = d;
    }
    // Multiples u^j p spanning the degree-d part generated by p.
    RowEchelon span(ncols);
    for (int j = 0; j + mb.mu <= d; ++j) span.add(make_sparse(flatten(scale(*p, Poly::monomial(j)), d)));
    for (const auto& v : null) {
      if (!span.contains(v)) {
        mb.p = *p;
        mb.q = unflatten(v, d);
        mb.nu = d;
        if (mb.mu + mb.nu != t.n) fail("InternalError", "mu-basis degrees do not sum to n");
        return mb;
      }
    }
  }
  fail("InternalError", "mu-basis search exceeded degree bound");
}

int poly_syz_dim(const PolyTriple& t, int k) {
  const MuBasis mb = mu_basis(t);
  if (k < mb.nu) {
    // Any element involving q has degree at least nu, so only multiples of p
    // fit; their count follows from the degree of p with A weighted by one.
    const int wp = std::max({mb.p[0].degree() + 1, mb.p[1].degree(), mb.p[2].degree()});
    return std::max(0, k - wp + 1);
  }
  return std::max(0, k - mb.mu + 1) + std::max(0, k - t.n + mb.mu + mb.e);
}

// ---------------------------------------------------------------- spline syzygies

std::vector<Rational> syz_coordinates(const SplineSyzTriple& s, int k) {
  std::vector<Rational> x;
  x.reserve(2 * k + 4 * (k + 1));
  const std::array<const UniSpline*, 3> comps{&s.A, &s.B, &s.C};
  for (int c = 0; c < 3; ++c) {
    const int len = c == 0 ? k : k + 1;
    for (int p = 0; p < 2; ++p) {
      const Poly& pc = comps[c]->piece(p);
      if (pc.degree() >= len) fail("DegreeOverflow", "syzygy component exceeds its degree bound");
      for (int e = 0; e < len; ++e) x.push_back(pc.coeff(e));
    }
  }
  return x;
}

SplineSyzTriple syz_from_coordinates(const std::vector<Rational>& x, const SyzProfile& prof) {
  const int k = prof.k;
  std::size_t pos = 0;
  auto take = [&](int len) {
    std::vector<Rational> v(x.begin() + pos, x.begin() + pos + len);
    pos += len;
    return Poly(std::move(v));
  };
  Poly al = take(k), ar = take(k), bl = take(k + 1), br = take(k + 1), cl = take(k + 1), cr = take(k + 1);
  return {UniSpline::make(al, ar, prof.r1, std::max(k - 1, 0)), UniSpline::make(bl, br, prof.r2, k),
          UniSpline::make(cl, cr, prof.r3, k)};
}

UniSpline syz_residual(const GluingTriple& g, const SplineSyzTriple& s) {
  Poly l = s.A.left() * g.a.left() + s.B.left() * g.b.left() + s.C.left() * g.c.left();
  Poly r = s.A.right() * g.a.right() + s.B.right() * g.b.right() + s.C.right() * g.c.right();
  const int k = std::max(l.degree(), r.degree());
  return UniSpline::make(std::move(l), std::move(r), -1, std::max(k, 0));
}

namespace {

// Linear system for Syz_k^{r1,r2,r3}: coefficient-wise identity per piece plus
// smoothness of each component at 1/2.
std::vector<SparseRow> spline_syz_rows(const GluingTriple& g, const SyzProfile& prof) {
  const int k = prof.k;
  const std::array<int, 3> len{k, k + 1, k + 1};
  const std::array<int, 3> reg{prof.r1, prof.r2, prof.r3};
  std::array<int, 3> offset{};
  offset[0] = 0;
  offset[1] = 2 * k;
  offset[2] = 2 * k + 2 * (k + 1);
  auto col = [&](int comp, int piece, int e) { return offset[comp] + piece * len[comp] + e; };
  std::vector<SparseRow> rows;
  for (int p = 0; p < 2; ++p) {
    const std::array<Poly, 3> gp = g.piece(p);
    int top = 0;
    for (int c = 0; c < 3; ++c) top = std::max(top, len[c] - 1 + std::max(gp[c].degree(), 0));
    std::vector<std::vector<std::pair<int, Rational>>> acc(top + 1);
    for (int c = 0; c < 3; ++c) {
      const auto& cf = gp[c].coeffs();
      for (int e = 0; e < len[c]; ++e) {
        for (std::size_t j = 0; j < cf.size(); ++j) {
          if (sgn(cf[j]) != 0) acc[e + j].emplace_back(col(c, p, e), cf[j]);
        }
      }
    }
    for (auto& r : acc) {
      std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      if (!r.empty()) rows.push_back(std::move(r));
    }
  }
  // Taylor coefficient j at 1/2 of u^e is binom(e, j) (1/2)^{e-j}.
  for (int c = 0; c < 3; ++c) {
    for (int j = 0; j <= reg[c] && j < len[c]; ++j) {
      SparseRow r;
      for (int p = 0; p < 2; ++p) {
        for (int e = j; e < len[c]; ++e) {
          mpz_class binom;
          mpz_bin_uiui(binom.get_mpz_t(), e, j);
          Rational v(binom);
          for (int t = 0; t < e - j; ++t) v *= kHalf;
          r.emplace_back(col(c, p, e), p == 0 ? v : Rational(-v));
        }
      }
      std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace

int brute_force_syz_dim(const GluingTriple& g, int k, int r1, int r2, int r3) {
  if (k < 0) fail("DomainError", "degree must be non-negative");
  const SyzProfile prof{k, r1, r2, r3};
  return prof.num_unknowns() - rank(spline_syz_rows(g, prof), prof.num_unknowns());
}

std::vector<SplineSyzTriple> brute_force_syz_basis(const GluingTriple& g, const SyzProfile& prof) {
  const int n = prof.num_unknowns();
  std::vector<SplineSyzTriple> out;
  for (const auto& v : nullspace(spline_syz_rows(g, prof), n)) {
    out.push_back(syz_from_coordinates(make_dense(v, n), prof));
  }
  return out;
}

int spline_syz_dim(const GluingTriple& g, int k, int r) {
  const PolyTriple t1 = piece_triple(g, 0), t2 = piece_triple(g, 1);
  if (k < std::min(t1.n, t2.n) + r) {
    fail("RangeViolation", "k = " + std::to_string(k) + " is below min(n1, n2) + r = " +
                               std::to_string(std::min(t1.n, t2.n) + r));
  }
  return poly_syz_dim(t1, k) + poly_syz_dim(t2, k) - std::min(r + 1, k) - (r + 1);
}

int delta_tau(const GluingTriple& g) { return sgn(g.a(kHalf)) == 0 ? 1 : 0; }

namespace {

struct PiecePair {
  SyzVector left, right;
};

bool fits(const PiecePair& e, int k) {
  for (const SyzVector* v : {&e.left, &e.right}) {
    if ((*v)[0].degree() > k - 1 || (*v)[1].degree() > k || (*v)[2].degree() > k) return false;
  }
  return true;
}

SplineSyzTriple to_spline(const PiecePair& e, int k, int r1, int r) {
  return {UniSpline::make(e.left[0], e.right[0], r1, std::max(k - 1, 0)),
          UniSpline::make(e.left[1], e.right[1], r, k), UniSpline::make(e.left[2], e.right[2], r, k)};
}

// A lift ptilde in Syz_{1,k} with ptilde = v mod (2u-1)^{r+1} componentwise,
// first by the Bezout construction and otherwise by an exact linear solve.
std::optional<SyzVector> lift_to_left(const PolyTriple& t1, const SyzVector& v, int k, int r) {
  const Poly f = mod_knot_factor(v[0], r + 1);
  const Poly g = mod_knot_factor(v[1], r + 1);
  const Poly h = mod_knot_factor(v[2], r + 1);
  const Poly R = t1.a * f + t1.b * g + t1.c * h;
  const Poly w = knot_factor(r + 1);
  auto [d, rem] = Poly::divmod(R, w);
  if (rem.is_zero()) {
    const auto eg = Poly::ext_gcd(t1.b, t1.c);
    if (eg.g.degree() == 0) {
      Poly P = d * eg.s, Q = d * eg.t;
      if (t1.c.degree() > 0) {
        auto [quo, pr] = Poly::divmod(P, t1.c);
        P = pr;
        Q = Q + quo * t1.b;
      } else {
        Q = Q + P * t1.b * (1 / t1.c.leading());
        P = Poly();
      }
      SyzVector lift{f, g - w * P, h - w * Q};
      if (lift[0].degree() <= k - 1 && lift[1].degree() <= k && lift[2].degree() <= k) return lift;
    }
  }
  // Exact solve: unknown (A,B,C) of degrees (k-1, k, k) with syzygy identity
  // and prescribed Taylor coefficients at 1/2 up to order r.
  const int la = k, lb = k + 1;
  const int ncols = la + 2 * lb;
  auto col = [&](int comp, int e) { return comp == 0 ? e : la + (comp - 1) * lb + e; };
  std::vector<SparseRow> rows;
  std::vector<Rational> rhs;
  const std::array<const Poly*, 3> comps{&t1.a, &t1.b, &t1.c};
  const int top = k + t1.n;
  std::vector<SparseRow> ident(top + 1);
  for (int c = 0; c < 3; ++c) {
    const int len = c == 0 ? la : lb;
    for (int e = 0; e < len; ++e) {
      const auto& cf = comps[c]->coeffs();
      for (std::size_t j = 0; j < cf.size(); ++j) {
        if (sgn(cf[j]) != 0) ident[e + j].emplace_back(col(c, e), cf[j]);
      }
    }
  }
  for (auto& r0 : ident) {
    std::sort(r0.begin(), r0.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    rows.push_back(std::move(r0));
    rhs.emplace_back(0);
  }
  for (int c = 0; c < 3; ++c) {
    const int len = c == 0 ? la : lb;
    const std::vector<Rational> target = v[c].taylor_at(kHalf);
    for (int j = 0; j <= r; ++j) {
      SparseRow row;
      for (int e = j; e < len; ++e) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), e, j);
        Rational val(binom);
        for (int s = 0; s < e - j; ++s) val *= kHalf;
        row.emplace_back(col(c, e), val);
      }
      rows.push_back(std::move(row));
      rhs.push_back(j < static_cast<int>(target.size()) ? target[j] : Rational(0));
    }
  }
  auto x = solve(rows, rhs, ncols);
  if (!x) return std::nullopt;
  SyzVector lift{Poly(std::vector<Rational>(x->begin(), x->begin() + la)),
                 Poly(std::vector<Rational>(x->begin() + la, x->begin() + la + lb)),
                 Poly(std::vector<Rational>(x->begin() + la + lb, x->end()))};
  return lift;
}

}  // namespace

SplineSyzBasis build_syz_basis(const GluingTriple& g, int k, int r, bool relaxed) {
  const PolyTriple t1 = piece_triple(g, 0), t2 = piece_triple(g, 1);
  if (k < std::min(t1.n, t2.n) + r) {
    fail("RangeViolation", "k = " + std::to_string(k) + " is below min(n1, n2) + r");
  }
  SplineSyzBasis out;
  out.mu_left = mu_basis(t1);
  out.mu_right = mu_basis(t2);
  const MuBasis& m1 = out.mu_left;
  const MuBasis& m2 = out.mu_right;
  const int r1 = relaxed ? r - 1 : r;
  const SyzProfile prof{k, r1, r, r};
  out.exact_dim = brute_force_syz_dim(g, k, r1, r, r);

  const SyzVector zero{};
  auto w = [](int i) { return knot_factor(i); };

  // Lifts of (0, p2) and (0, q2) to elements of ker(phi).
  const auto pt = lift_to_left(t1, m2.p, k, r);
  const auto qt = lift_to_left(t1, m2.q, k, r);

  // Module generators Y (kept for reporting even when they exceed degree k).
  auto push_gen = [&](const PiecePair& e) {
    try {
      out.generators_Y.push_back(to_spline(e, std::max(k, 64), r1, r));
    } catch (const Error&) {
    }
  };
  push_gen({zero, scale(m2.p, w(r + 1))});
  push_gen({zero, scale(m2.q, w(r + 1))});
  if (pt) push_gen({*pt, m2.p});
  if (qt) push_gen({*qt, m2.q});
  push_gen({scale(m1.q, w(r + 1)), zero});
  push_gen({scale(m1.p, w(r + 1)), zero});

  for (const std::string reading : {"corrected", "printed"}) {
    std::vector<std::pair<PiecePair, std::string>> cand;
    for (int i = r + 1; i <= k - m2.mu; ++i) cand.push_back({{zero, scale(m2.p, w(i))}, "Z1"});
    for (int i = r + 1; i <= k - m2.nu; ++i) cand.push_back({{zero, scale(m2.q, w(i))}, "Z2"});
    const int z3_hi = reading == "corrected" ? k - m1.nu : k - m1.mu;
    const int z4_hi = reading == "corrected" ? k - m1.mu : k - m2.nu;
    for (int i = r + 1; i <= z3_hi; ++i) cand.push_back({{scale(m1.q, w(i)), zero}, "Z3"});
    for (int i = r + 1; i <= z4_hi; ++i) cand.push_back({{scale(m1.p, w(i)), zero}, "Z4"});
    for (int i = 0; i <= r; ++i) {
      if (pt) cand.push_back({{scale(*pt, w(i)), scale(m2.p, w(i))}, "Z5"});
    }
    for (int i = 0; i <= r; ++i) {
      if (qt) cand.push_back({{scale(*qt, w(i)), scale(m2.q, w(i))}, "Z6"});
    }
    if (relaxed && delta_tau(g) == 1) {
      // alpha p2 + beta q2 with vanishing B and C components at 1/2.
      const Rational pb = m2.p[1](kHalf), qb = m2.q[1](kHalf), pc = m2.p[2](kHalf), qc = m2.q[2](kHalf);
      std::vector<SparseRow> sys{make_sparse({pb, qb}), make_sparse({pc, qc})};
      const auto ker = nullspace(sys, 2);
      if (!ker.empty()) {
        const auto ab = make_dense(ker.front(), 2);
        const SyzVector comb = add(scale(m2.p, Poly::constant(ab[0])), scale(m2.q, Poly::constant(ab[1])));
        cand.push_back({{zero, scale(comb, w(r))}, "relaxed"});
      }
    }
    SplineSyzBasis trial = out;
    trial.reading = reading;
    RowEchelon ech(prof.num_unknowns());
    bool independent = true;
    for (const auto& [e, tag] : cand) {
      if (!fits(e, k)) continue;
      SplineSyzTriple s;
      try {
        s = to_spline(e, k, r1, r);
      } catch (const Error&) {
        continue;  // lift not smooth enough for this profile
      }
      if (!syz_residual(g, s).is_zero()) fail("InternalError", "syzygy family element violates the identity");
      if (!ech.add(make_sparse(syz_coordinates(s, k)))) {
        independent = false;
        break;
      }
      trial.elements.push_back(std::move(s));
      trial.tags.push_back(tag);
    }
    if (!independent) continue;
    // Complete from the exact nullspace when the structured families fall short.
    if (static_cast<int>(trial.elements.size()) < trial.exact_dim) {
      for (auto& s : brute_force_syz_basis(g, prof)) {
        if (ech.add(make_sparse(syz_coordinates(s, k)))) {
          trial.elements.push_back(std::move(s));
          trial.tags.emplace_back("completion");
          ++trial.completion_count;
        }
      }
    }
    if (static_cast<int>(trial.elements.size()) != trial.exact_dim) {
      fail("InternalRankError", "syzygy basis size differs from the exact dimension");
    }
    return trial;
  }
  fail("InternalRankError", "structured syzygy families are linearly dependent");
}

}  // namespace g1s
