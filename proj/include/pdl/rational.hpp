#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace pdl {

// Compare against Rational(k), never a bare int: with Boost 1.74 under C++20
// the mixed-type operator== recurses forever.
using Rational = boost::rational<std::int64_t>;

// Parses "0.4", "3", "2/3" or "1e-2" into an exact rational.
Rational parse_rational(std::string_view text);

// Fixed-point rendering with `digits` decimals, rounded half away from zero.
std::string format_fixed(const Rational& value, int digits);

// value * 100 rendered with two decimals ("100.00").
std::string format_percent(const Rational& value);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

inline Rational abs_diff(const Rational& a, const Rational& b) {
  return a > b ? a - b : b - a;
}

}  // namespace pdl
