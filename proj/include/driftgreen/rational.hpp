#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace driftgreen {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "3", "-2/5", "0.125", "1e-3" or "2.5E+2" into an exact rational.
/// Decimal literals are read as written, so "0.1" is exactly 1/10.
Rational parse_rational(std::string_view text);

/// Exact rational value of a finite double.
Rational rational_from_double(double value);

/// "2/3", "-2/5", "0", "7".
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

} // namespace driftgreen
