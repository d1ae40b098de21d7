#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace edgeworth {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Conversion helpers so templated numerics can be written once for double and
// Rational.
template <class T>
T scalar_from_int(long long v) {
  return T(v);
}

template <class T>
T scalar_from_rational(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>) {
    return r;
  } else {
    return static_cast<T>(r);
  }
}

inline double to_double(double v) { return v; }
inline double to_double(const Rational& r) { return static_cast<double>(r); }

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

// "p/q" or "p" for rationals.
std::string format_rational(const Rational& r);
Rational parse_rational(std::string_view text);

}  // namespace edgeworth
