#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace bifix {

/// Arbitrary-precision signed integer, used by the exact numeric mode.
using BigInt = boost::multiprecision::cpp_int;
/// Arbitrary-precision rational, kept in canonical (reduced) form.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// "3/10", or just "3" when the denominator is one.
std::string format_rational(const Rational& x);

/// Parses "a/b", decimal ("0.3", "-1.25e-2") or integer text into an exact
/// rational. Decimal digits are taken literally, so "0.3" is 3/10, not the
/// nearest double. Throws std::invalid_argument on malformed text.
Rational rational_from_string(const std::string& text);

}  // namespace bifix
