#include "edgeworth/hermite.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgeworth {

namespace {

constexpr unsigned kMaxHermite = 12;

std::array<HermitePoly, kMaxHermite + 1> build_table() {
  std::array<HermitePoly, kMaxHermite + 1> t;
  t[0] = {0, {1}};
  t[1] = {1, {0, 1}};
  for (unsigned n = 1; n < kMaxHermite; ++n) {
    HermitePoly next{n + 1, std::vector<long long>(n + 2, 0)};
    for (std::size_t i = 0; i < t[n].coeffs.size(); ++i) next.coeffs[i + 1] += t[n].coeffs[i];
    for (std::size_t i = 0; i < t[n - 1].coeffs.size(); ++i) {
      next.coeffs[i] -= static_cast<long long>(n) * t[n - 1].coeffs[i];
    }
    t[n + 1] = std::move(next);
  }
  return t;
}

}  // namespace

double HermitePoly::operator()(double x) const { return eval<double>(x); }

const HermitePoly& hermite_coeffs(unsigned n) {
  static const auto table = build_table();
  if (n > kMaxHermite) throw std::invalid_argument("hermite_coeffs: degree above 12");
  return table[n];
}

double hermite_value(unsigned n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (unsigned j = 1; j < n; ++j) {
    double next = x * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_values(unsigned n, double x, std::span<double> out) {
  out[0] = 1.0;
  if (n >= 1) out[1] = x;
  for (unsigned j = 1; j < n; ++j) out[j + 1] = x * out[j] - j * out[j - 1];
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double gaussian_pdf(std::span<const double> x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  return std::pow(kInvSqrt2Pi, static_cast<double>(x.size())) * std::exp(-0.5 * sq);
}

double gaussian_derivative(const MultiIndex& nu, std::span<const double> x) {
  if (nu.dim() != x.size()) throw std::invalid_argument("gaussian_derivative: dimension mismatch");
  if (nu.degree() > kMaxHermite) throw std::invalid_argument("gaussian_derivative: order above 12");
  double prod = gaussian_pdf(x);
  for (std::size_t i = 0; i < x.size(); ++i) prod *= hermite_value(nu[i], x[i]);
  return (nu.degree() % 2 == 0) ? prod : -prod;
}

namespace {

// phi^{(n-1)}(x) = (-1)^{n-1} He_{n-1}(x) phi(x), vanishing at +-inf.
double antiderivative(unsigned n, double x) {
  if (std::isinf(x)) return 0.0;
  double v = hermite_value(n - 1, x) * std_normal_pdf(x);
  return ((n - 1) % 2 == 0) ? v : -v;
}

}  // namespace

double gaussian_partial_integral(unsigned n, double a, double b) {
  if (std::isnan(a) || std::isnan(b) || a > b) {
    throw std::invalid_argument("gaussian_partial_integral: requires a <= b");
  }
  if (n == 0) {
    // Difference of upper tails is more accurate when both ends are positive.
    if (a > 0.0) return std_normal_cdf(-a) - std_normal_cdf(-b);
    return std_normal_cdf(b) - std_normal_cdf(a);
  }
  return antiderivative(n, b) - antiderivative(n, a);
}

}  // namespace edgeworth
