#pragma once

#include <array>
#include <string>
#include <vector>

#include "g1s/linalg.hpp"
#include "g1s/poly.hpp"

namespace g1s {

// Edge gluing data [a, b, c] stored in the frame of the edge's sigma_1 face.
struct GluingTriple {
  UniSpline a, b, c;

  // Validates c(0) != 0 and c(1) != 0.
  static GluingTriple make(UniSpline a, UniSpline b, UniSpline c);

  bool crossing_at_0() const { return sgn(a(Rational(0))) == 0; }
  bool crossing_at_1() const { return sgn(a(Rational(1))) == 0; }
  // Regularity shared by the three components.
  int regularity() const;
  // Polynomial triple of piece p (0 = left, 1 = right).
  std::array<Poly, 3> piece(int p) const { return {a.piece(p), b.piece(p), c.piece(p)}; }
};

struct PolyTriple {
  Poly a, b, c;
  int n = 0;
  // Checks gcd(a, c) = gcd(b, c) = 1 and that the triple is nonzero.
  static PolyTriple make(Poly a, Poly b, Poly c);
};

using SyzVector = std::array<Poly, 3>;

struct MuBasis {
  SyzVector p, q;
  int mu = 0;
  int nu = 0;
  int n = 0;
  int e = 0;
};

// e = 0 when min(n + 1 - deg a, n - deg b, n - deg c) = 0 (zero components drop out), else 1.
int e_flag(const PolyTriple& t);
MuBasis mu_basis(const PolyTriple& t);
// dim {(A,B,C): deg A <= k-1, deg B, C <= k, Aa + Bb + Cc = 0}. Closed form in
// mu, n, e for k >= nu; below nu only multiples of p fit and are counted directly.
int poly_syz_dim(const PolyTriple& t, int k);
PolyTriple piece_triple(const GluingTriple& g, int p);

// Spline syzygy (A, B, C) with A in U^{r1}_{k-1} and B, C in U^{r2}_k, U^{r3}_k.
struct SplineSyzTriple {
  UniSpline A, B, C;
};

// Profile of a spline syzygy space.
struct SyzProfile {
  int k = 0;
  int r1 = 0, r2 = 0, r3 = 0;
  int num_unknowns() const { return 2 * k + 4 * (k + 1); }
};

// Coordinates [A_L, A_R, B_L, B_R, C_L, C_R] in monomial coefficients.
std::vector<Rational> syz_coordinates(const SplineSyzTriple& s, int k);
SplineSyzTriple syz_from_coordinates(const std::vector<Rational>& x, const SyzProfile& prof);
// Exact piecewise A*a + B*b + C*c.
UniSpline syz_residual(const GluingTriple& g, const SplineSyzTriple& s);

struct SplineSyzBasis {
  std::vector<SplineSyzTriple> elements;
  // "Z1".."Z6", "relaxed" or "completion".
  std::vector<std::string> tags;
  // Module generating set Y (six elements, piecewise pairs).
  std::vector<SplineSyzTriple> generators_Y;
  MuBasis mu_left, mu_right;
  int exact_dim = 0;
  int completion_count = 0;
  // "corrected" or "printed" reading of the family index ranges.
  std::string reading;
};

// Closed dimension formula from the two mu-bases; RangeViolation when k < min(n1, n2) + r.
int spline_syz_dim(const GluingTriple& g, int k, int r);
int delta_tau(const GluingTriple& g);
int brute_force_syz_dim(const GluingTriple& g, int k, int r1, int r2, int r3);
// Basis of the exact nullspace, in coordinate (RREF) order.
std::vector<SplineSyzTriple> brute_force_syz_basis(const GluingTriple& g, const SyzProfile& prof);
SplineSyzBasis build_syz_basis(const GluingTriple& g, int k, int r, bool relaxed);

}  // namespace g1s
