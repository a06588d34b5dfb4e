#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "g1s/rational.hpp"

namespace g1s {

// Degree reported for the zero polynomial.
inline constexpr int kMinusInfinity = std::numeric_limits<int>::min() / 4;

// Univariate polynomial over Q in the monomial basis of the global variable u.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  Poly(std::initializer_list<Rational> coeffs);

  static Poly constant(const Rational& c);
  static Poly monomial(int degree, const Rational& c = 1);
  // (alpha*u + beta)^n
  static Poly affine_power(const Rational& alpha, const Rational& beta, int n);

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return is_zero() ? kMinusInfinity : static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int i) const;
  Rational leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }

  Rational operator()(const Rational& u) const;
  double eval(double u) const;

  Poly derivative() const;
  // Antiderivative vanishing at u = 0.
  Poly antiderivative() const;
  Rational integral(const Rational& lo, const Rational& hi) const;
  // p(alpha*u + beta)
  Poly compose_affine(const Rational& alpha, const Rational& beta) const;
  // Coefficients of p in powers of (u - x0).
  std::vector<Rational> taylor_at(const Rational& x0) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

  Poly pow(int n) const;
  Poly monic() const;

  // Euclidean division a = q*b + r with deg r < deg b.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
  // Monic gcd; gcd(0,0) raises.
  static Poly gcd(const Poly& a, const Poly& b);
  // Returns (g, s, t) with s*a + t*b = g = gcd(a,b) monic.
  struct ExtGcd;
  static ExtGcd ext_gcd(const Poly& a, const Poly& b);

  std::string str() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

struct Poly::ExtGcd {
  Poly g, s, t;
};

// (2u - 1)^n, the power of the interior knot factor.
Poly knot_factor(int n);

// C^r piecewise polynomial on [0, 1/2] and [1/2, 1] with degree at most k.
class UniSpline {
 public:
  UniSpline() = default;
  // Validates divisibility of left - right by (2u-1)^{r+1} and the degree bound.
  static UniSpline make(Poly left, Poly right, int r, int k);
  static UniSpline polynomial(const Poly& p, int k);
  static UniSpline constant(const Rational& c, int k);

  const Poly& left() const { return left_; }
  const Poly& right() const { return right_; }
  int regularity() const { return r_; }
  int degree_bound() const { return k_; }
  bool is_zero() const { return left_.is_zero() && right_.is_zero(); }

  // Value at u; the left piece is used at u = 1/2 (both agree for r >= 0).
  Rational operator()(const Rational& u) const;
  double eval(double u) const;
  const Poly& piece(int p) const { return p == 0 ? left_ : right_; }

  UniSpline derivative() const;
  // Antiderivative vanishing at 0, one degree and one regularity higher.
  UniSpline antiderivative() const;
  // u -> 1 - u, swaps the pieces.
  UniSpline reflect() const;

  friend UniSpline operator+(const UniSpline& a, const UniSpline& b);
  friend UniSpline operator-(const UniSpline& a, const UniSpline& b);
  friend UniSpline operator*(const Rational& s, const UniSpline& a);
  friend UniSpline operator*(const UniSpline& a, const UniSpline& b);
  friend bool operator==(const UniSpline& a, const UniSpline& b) {
    return a.left_ == b.left_ && a.right_ == b.right_;
  }

  // Largest r' such that (2u-1)^{r'+1} divides left - right (capped at degree bound).
  int actual_regularity() const;

 private:
  UniSpline(Poly left, Poly right, int r, int k)
      : left_(std::move(left)), right_(std::move(right)), r_(r), k_(k) {}
  Poly left_, right_;
  int r_ = -1;
  int k_ = 0;
};

bool divisible_by_knot_factor(const Poly& p, int n);

// B-spline basis of U^r_k on the knot vector [0^{k+1}, (1/2)^{k-r}, 1^{k+1}].
class BSplineBasis {
 public:
  BSplineBasis(int k, int r);

  int degree() const { return k_; }
  int regularity() const { return r_; }
  int m() const { return m_; }
  int size() const { return m_ + 1; }
  const std::vector<Rational>& knots() const { return knots_; }

  const UniSpline& function(int i) const { return funcs_[i]; }
  // Pieces of N_i and N_i' as monomial polynomials.
  const Poly& piece(int i, int p) const { return funcs_[i].piece(p); }
  const Poly& derivative_piece(int i, int p) const { return dfuncs_[i].piece(p); }

  Rational value(int i, const Rational& u) const { return funcs_[i](u); }
  double value(int i, double u) const { return funcs_[i].eval(u); }
  double derivative_value(int i, double u) const { return dfuncs_[i].eval(u); }
  // d^order N_i / du^order at u = 0 (right-sided).
  Rational derivative_at_zero(int i, int order) const;

  std::vector<Rational> to_bspline(const UniSpline& f) const;
  UniSpline from_bspline(const std::vector<Rational>& c) const;
  // Raw piece coefficients [left 0..k, right 0..k] for a coefficient vector.
  std::vector<Rational> piece_coefficients(const std::vector<Rational>& c) const;

 private:
  int k_, r_, m_;
  std::vector<Rational> knots_;
  std::vector<UniSpline> funcs_;
  std::vector<UniSpline> dfuncs_;
  // Left inverse of the map coefficients -> stacked piece coefficients.
  std::vector<std::vector<std::pair<int, Rational>>> left_inverse_;
};

// Shared, lazily built basis for (k, r); thread-safe.
const BSplineBasis& bspline_basis(int k, int r);

// Hermite blends d0 = N0 + N1 and d1 = N2 + ... + N_m of U^r_k, so d0 + d1 = 1.
std::pair<UniSpline, UniSpline> hermite_blends(int k, int r);

}  // namespace g1s
