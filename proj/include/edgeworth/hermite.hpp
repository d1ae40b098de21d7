#pragma once

#include "edgeworth/multiindex.hpp"

#include <span>
#include <vector>

namespace edgeworth {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

// Probabilists' Hermite polynomial He_n with exact integer coefficients in the
// monomial basis (coeffs[i] multiplies x^i).
struct HermitePoly {
  unsigned degree = 0;
  std::vector<long long> coeffs;

  double operator()(double x) const;

  template <class T>
  T eval(const T& x) const {
    T acc(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + T(coeffs[i]);
    return acc;
  }
};

// He_0..He_12 from He_{n+1} = x He_n - n He_{n-1}.
const HermitePoly& hermite_coeffs(unsigned n);

// He_n(x) by the three-term recurrence.
double hermite_value(unsigned n, double x);

// Fills out[0..n] with He_0(x)..He_n(x).
void hermite_values(unsigned n, double x, std::span<double> out);

double std_normal_pdf(double x);
// Phi(x) = erfc(-x/sqrt2)/2.
double std_normal_cdf(double x);

// Standard Gaussian density on R^k.
double gaussian_pdf(std::span<const double> x);

// D^nu phi(x) = (-1)^{|nu|} prod_i He_{nu_i}(x_i) phi(x). Throws
// std::invalid_argument on dimension mismatch or |nu| > 12.
double gaussian_derivative(const MultiIndex& nu, std::span<const double> x);

// Integral over [a, b] of the n-th derivative of the 1-D standard normal
// density; a and b may be infinite. Throws std::invalid_argument if a > b.
double gaussian_partial_integral(unsigned n, double a, double b);

}  // namespace edgeworth
