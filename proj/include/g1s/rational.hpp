#pragma once

#include <gmpxx.h>

#include <string>

namespace g1s {

// Arbitrary-precision rational. Arithmetic results are canonical, but the
// two-argument constructor is not: only build Rational(p, q) from reduced pairs.
using Rational = mpq_class;

// Canonical "p/q" form, "0/1" for zero.
std::string to_string(const Rational& x);

// Accepts "p/q", "p" or a decimal literal such as "-0.25".
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& x) { return x.get_d(); }

}  // namespace g1s
