#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dendrite {

using Rational = mpq_class;

// "p/q" always, including integers ("1/1") so that diffs stay uniform.
std::string to_string(const Rational& q);
// Accepts "p/q", "p", or a decimal literal such as "0.25" (converted exactly).
Rational parse_rational(std::string_view text);

Rational pow2(int e);
Rational power(const Rational& base, int e);

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

// Correctly rounded to nearest (mpq_get_d truncates).
double to_double(const Rational& q);
inline double to_double(double x) { return x; }

// Scalar conversion used by the templated solvers.
template <class T>
T from_rational(const Rational& q);
template <>
inline Rational from_rational<Rational>(const Rational& q) { return q; }
template <>
inline double from_rational<double>(const Rational& q) { return to_double(q); }

}  // namespace dendrite
