#include "g1s/poly.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "g1s/error.hpp"
#include "g1s/linalg.hpp"

namespace g1s {

// ---------------------------------------------------------------- Rational

std::string to_string(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char ch : text) {
    if (ch != ' ') t.push_back(ch);
  }
  if (t.empty()) fail("ParseError", "empty rational literal");
  try {
    const auto dot = t.find('.');
    if (dot != std::string::npos && t.find('/') == std::string::npos) {
      // Decimal literal: shift the point into the denominator.
      std::string digits = t.substr(0, dot) + t.substr(dot + 1);
      mpz_class den = 1;
      for (std::size_t i = dot + 1; i < t.size(); ++i) den *= 10;
      if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
      if (digits[0] == '+') digits.erase(0, 1);
      Rational q(mpz_class(digits, 10), den);
      q.canonicalize();
      return q;
    }
    std::string s = t;
    if (s[0] == '+') s.erase(0, 1);
    Rational q(s, 10);
    if (q.get_den() == 0) fail("ParseError", "zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    fail("ParseError", "invalid rational literal '" + text + "'");
  }
}

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly::Poly(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }

void Poly::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(int degree, const Rational& c) {
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(v));
}

Poly Poly::affine_power(const Rational& alpha, const Rational& beta, int n) {
  return Poly({beta, alpha}).pow(n);
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0;
  return coeffs_[i];
}

Rational Poly::operator()(const Rational& u) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

double Poly::eval(double u) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + it->get_d();
  return acc;
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> v(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * static_cast<long>(i);
  return Poly(std::move(v));
}

Poly Poly::antiderivative() const {
  if (is_zero()) return {};
  std::vector<Rational> v(coeffs_.size() + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i + 1] = coeffs_[i] / static_cast<long>(i + 1);
  return Poly(std::move(v));
}

Rational Poly::integral(const Rational& lo, const Rational& hi) const {
  const Poly f = antiderivative();
  return f(hi) - f(lo);
}

Poly Poly::compose_affine(const Rational& alpha, const Rational& beta) const {
  Poly acc;
  const Poly lin({beta, alpha});
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + Poly::constant(*it);
  return acc;
}

std::vector<Rational> Poly::taylor_at(const Rational& x0) const {
  Poly shifted = compose_affine(1, x0);
  std::vector<Rational> v = shifted.coeffs_;
  return v;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& c : p.coeffs_) c = -c;
  return p;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (sgn(a.coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Poly(std::move(v));
}

Poly Poly::pow(int n) const {
  Poly acc = Poly::constant(1);
  for (int i = 0; i < n; ++i) acc = acc * *this;
  return acc;
}

Poly Poly::monic() const {
  if (is_zero()) return {};
  return *this * (1 / leading());
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) fail("DivisionByZero", "polynomial division by zero");
  if (a.is_zero()) return {Poly(), Poly()};
  Poly r = a;
  std::vector<Rational> q(std::max(0, a.degree() - b.degree() + 1));
  const Rational lb = b.leading();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const int shift = r.degree() - b.degree();
    const Rational f = r.leading() / lb;
    q[shift] = f;
    r -= Poly::monomial(shift, f) * b;
  }
  return {Poly(std::move(q)), r};
}

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) fail("DomainError", "gcd(0, 0) is undefined");
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly::ExtGcd Poly::ext_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) fail("DomainError", "gcd(0, 0) is undefined");
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(1), s1;
  Poly t0, t1 = Poly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  const Rational inv = 1 / r0.leading();
  return {r0 * inv, s0 * inv, t0 * inv};
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    if (!first) os << (sgn(coeffs_[i]) > 0 ? " + " : " - ");
    else if (sgn(coeffs_[i]) < 0) os << "-";
    first = false;
    const Rational mag = abs(coeffs_[i]);
    if (i == 0 || mag != 1) os << mag.get_str();
    if (i >= 1) os << "u";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

Poly knot_factor(int n) { return Poly::affine_power(2, -1, n); }

bool divisible_by_knot_factor(const Poly& p, int n) {
  if (n <= 0 || p.is_zero()) return true;
  const std::vector<Rational> t = p.taylor_at(Rational(1, 2));
  for (int i = 0; i < n && i < static_cast<int>(t.size()); ++i) {
    if (sgn(t[i]) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- UniSpline

UniSpline UniSpline::make(Poly left, Poly right, int r, int k) {
  if (r < -1) fail("DomainError", "spline regularity must be >= -1");
  if (left.degree() > k || right.degree() > k) {
    fail("DegreeOverflow", "spline piece degree exceeds bound " + std::to_string(k));
  }
  if (!divisible_by_knot_factor(left - right, r + 1)) {
    fail("SmoothnessViolation", "pieces " + left.str() + " | " + right.str() + " are not C^" +
                                    std::to_string(r) + " at 1/2");
  }
  return UniSpline(std::move(left), std::move(right), r, k);
}

UniSpline UniSpline::polynomial(const Poly& p, int k) {
  return make(p, p, std::max(k, 0), std::max(k, p.degree()));
}

UniSpline UniSpline::constant(const Rational& c, int k) {
  return make(Poly::constant(c), Poly::constant(c), std::max(k, 0), std::max(k, 0));
}

Rational UniSpline::operator()(const Rational& u) const {
  return u <= Rational(1, 2) ? left_(u) : right_(u);
}

double UniSpline::eval(double u) const { return u <= 0.5 ? left_.eval(u) : right_.eval(u); }

UniSpline UniSpline::derivative() const {
  return UniSpline(left_.derivative(), right_.derivative(), std::max(-1, r_ - 1), std::max(0, k_ - 1));
}

UniSpline UniSpline::antiderivative() const {
  const Poly fl = left_.antiderivative();
  const Rational half(1, 2);
  Poly fr = right_.antiderivative();
  fr += Poly::constant(fl(half) - fr(half));
  return UniSpline(fl, fr, r_ + 1, k_ + 1);
}

UniSpline UniSpline::reflect() const {
  return UniSpline(right_.compose_affine(-1, 1), left_.compose_affine(-1, 1), r_, k_);
}

UniSpline operator+(const UniSpline& a, const UniSpline& b) {
  return UniSpline::make(a.left_ + b.left_, a.right_ + b.right_, std::min(a.r_, b.r_),
                         std::max(a.k_, b.k_));
}

UniSpline operator-(const UniSpline& a, const UniSpline& b) {
  return UniSpline::make(a.left_ - b.left_, a.right_ - b.right_, std::min(a.r_, b.r_),
                         std::max(a.k_, b.k_));
}

UniSpline operator*(const Rational& s, const UniSpline& a) {
  return UniSpline(a.left_ * s, a.right_ * s, a.r_, a.k_);
}

UniSpline operator*(const UniSpline& a, const UniSpline& b) {
  return UniSpline::make(a.left_ * b.left_, a.right_ * b.right_, std::min(a.r_, b.r_), a.k_ + b.k_);
}

int UniSpline::actual_regularity() const {
  const Poly d = left_ - right_;
  if (d.is_zero()) return k_;
  int r = -1;
  while (r + 1 < k_ && divisible_by_knot_factor(d, r + 2)) ++r;
  return r;
}

// ---------------------------------------------------------------- BSplineBasis

BSplineBasis::BSplineBasis(int k, int r) : k_(k), r_(r), m_(2 * k - r) {
  if (k < 0 || r < -1 || r >= k) fail("DomainError", "B-spline basis needs k >= 0 and -1 <= r < k");
  for (int i = 0; i <= k; ++i) knots_.emplace_back(0);
  for (int i = 0; i < k - r; ++i) knots_.emplace_back(1, 2);
  for (int i = 0; i <= k; ++i) knots_.emplace_back(1);
  const int nk = static_cast<int>(knots_.size());
  const Rational half(1, 2);
  // Cox-de Boor recursion carried out on each of the two knot intervals.
  std::vector<std::vector<Poly>> pieces(2);
  for (int p = 0; p < 2; ++p) {
    const Rational lo = p == 0 ? Rational(0) : half;
    const Rational hi = p == 0 ? half : Rational(1);
    std::vector<Poly> cur(nk - 1);
    for (int i = 0; i + 1 < nk; ++i) {
      if (knots_[i] == lo && knots_[i + 1] == hi) cur[i] = Poly::constant(1);
    }
    for (int d = 1; d <= k; ++d) {
      std::vector<Poly> next(nk - 1 - d);
      for (int i = 0; i + d + 1 < nk; ++i) {
        Poly acc;
        const Rational den1 = knots_[i + d] - knots_[i];
        if (sgn(den1) != 0 && !cur[i].is_zero()) {
          acc += Poly({-knots_[i] / den1, 1 / den1}) * cur[i];
        }
        const Rational den2 = knots_[i + d + 1] - knots_[i + 1];
        if (sgn(den2) != 0 && !cur[i + 1].is_zero()) {
          acc += Poly({knots_[i + d + 1] / den2, -1 / den2}) * cur[i + 1];
        }
        next[i] = std::move(acc);
      }
      cur = std::move(next);
    }
    pieces[p] = std::move(cur);
  }
  for (int i = 0; i <= m_; ++i) {
    funcs_.push_back(UniSpline::make(pieces[0][i], pieces[1][i], r, k));
    dfuncs_.push_back(funcs_.back().derivative());
  }
  // Left inverse: pick m+1 independent piece-coefficient rows of the
  // (2k+2) x (m+1) map and invert that square block.
  const int nrows = 2 * (k + 1);
  std::vector<SparseRow> cols_as_rows(m_ + 1);
  std::vector<std::vector<Rational>> mat(nrows, std::vector<Rational>(m_ + 1));
  for (int i = 0; i <= m_; ++i) {
    for (int p = 0; p < 2; ++p) {
      for (int e = 0; e <= k; ++e) mat[p * (k + 1) + e][i] = funcs_[i].piece(p).coeff(e);
    }
  }
  std::vector<int> chosen;
  RowEchelon ech(m_ + 1, false);
  for (int row = 0; row < nrows && static_cast<int>(chosen.size()) <= m_; ++row) {
    if (ech.add(make_sparse(mat[row]))) chosen.push_back(row);
  }
  if (static_cast<int>(chosen.size()) != m_ + 1) fail("InternalError", "B-spline basis is singular");
  // Invert the chosen square block by solving for each unit vector.
  std::vector<SparseRow> block;
  for (int row : chosen) block.push_back(make_sparse(mat[row]));
  left_inverse_.assign(m_ + 1, {});
  for (int t = 0; t <= m_; ++t) {
    std::vector<Rational> rhs(m_ + 1);
    rhs[t] = 1;
    auto x = solve(block, rhs, m_ + 1);
    if (!x) fail("InternalError", "B-spline basis block is singular");
    for (int i = 0; i <= m_; ++i) {
      if (sgn((*x)[i]) != 0) left_inverse_[i].emplace_back(chosen[t], (*x)[i]);
    }
  }
}

Rational BSplineBasis::derivative_at_zero(int i, int order) const {
  Poly p = funcs_[i].left();
  for (int o = 0; o < order; ++o) p = p.derivative();
  return p(Rational(0));
}

std::vector<Rational> BSplineBasis::piece_coefficients(const std::vector<Rational>& c) const {
  std::vector<Rational> y(2 * (k_ + 1));
  for (int i = 0; i <= m_; ++i) {
    if (sgn(c[i]) == 0) continue;
    for (int p = 0; p < 2; ++p) {
      const auto& cf = funcs_[i].piece(p).coeffs();
      for (std::size_t e = 0; e < cf.size(); ++e) y[p * (k_ + 1) + e] += c[i] * cf[e];
    }
  }
  return y;
}

std::vector<Rational> BSplineBasis::to_bspline(const UniSpline& f) const {
  if (f.left().degree() > k_ || f.right().degree() > k_) {
    fail("DegreeOverflow", "spline degree exceeds basis degree " + std::to_string(k_));
  }
  if (!divisible_by_knot_factor(f.left() - f.right(), r_ + 1)) {
    fail("SmoothnessViolation", "spline is not C^" + std::to_string(r_) + " at 1/2");
  }
  std::vector<Rational> y(2 * (k_ + 1));
  for (int p = 0; p < 2; ++p) {
    for (int e = 0; e <= k_; ++e) y[p * (k_ + 1) + e] = f.piece(p).coeff(e);
  }
  std::vector<Rational> c(m_ + 1);
  for (int i = 0; i <= m_; ++i) {
    for (const auto& [row, v] : left_inverse_[i]) c[i] += v * y[row];
  }
  if (piece_coefficients(c) != y) fail("InternalError", "B-spline conversion round trip failed");
  return c;
}

UniSpline BSplineBasis::from_bspline(const std::vector<Rational>& c) const {
  if (static_cast<int>(c.size()) != m_ + 1) fail("ShapeMismatch", "coefficient count differs from basis size");
  const std::vector<Rational> y = piece_coefficients(c);
  std::vector<Rational> l(y.begin(), y.begin() + k_ + 1), rr(y.begin() + k_ + 1, y.end());
  return UniSpline::make(Poly(std::move(l)), Poly(std::move(rr)), r_, k_);
}

const BSplineBasis& bspline_basis(int k, int r) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<BSplineBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{k, r}];
  if (!slot) slot = std::make_unique<BSplineBasis>(k, r);
  return *slot;
}

std::pair<UniSpline, UniSpline> hermite_blends(int k, int r) {
  if (2 * k + 1 - r < 4) fail("DimensionTooSmall", "Hermite blends need 2k + 1 - r >= 4");
  const BSplineBasis& b = bspline_basis(k, r);
  const int m = b.m();
  UniSpline d1 = b.function(2);
  for (int i = 3; i <= m; ++i) d1 = d1 + b.function(i);
  return {b.function(0) + b.function(1), d1};
}

}  // namespace g1s
