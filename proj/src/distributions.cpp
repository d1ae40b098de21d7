#include "edgeworth/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace edgeworth {

namespace {

Rational rational_pow(const Rational& base, unsigned p) {
  Rational r(1);
  for (unsigned i = 0; i < p; ++i) r *= base;
  return r;
}

}  // namespace

Rational parse_decimal_rational(std::string_view text) {
  if (text.find('/') != std::string_view::npos) return parse_rational(text);
  std::string s(text);
  bool negative = false;
  std::size_t pos = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    pos = 1;
  }
  BigInt num = 0, den = 1;
  bool seen_dot = false, seen_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      seen_digit = true;
    } else {
      throw std::invalid_argument("cannot parse number '" + s + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("cannot parse number '" + s + "'");
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

DistributionSpec::DistributionSpec(LawKind kind, std::string name, std::size_t k, Rational param)
    : kind_(kind), name_(std::move(name)), k_(k), param_(std::move(param)) {
  if (k_ == 0) throw std::invalid_argument("distribution dimension must be >= 1");
  coord_moments_.assign(kMaxMomentOrder + 1, Rational(0));
  coord_moments_[0] = 1;
}

DistributionSpec DistributionSpec::rademacher(std::size_t k) {
  DistributionSpec d(LawKind::Rademacher, "rademacher", k, Rational(0));
  d.support_ = {-1.0, 1.0};
  d.probs_ = {0.5, 0.5};
  for (unsigned p = 2; p <= kMaxMomentOrder; p += 2) d.coord_moments_[p] = 1;
  return d;
}

DistributionSpec DistributionSpec::uniform(std::size_t k) {
  DistributionSpec d(LawKind::Uniform, "uniform", k, Rational(0));
  // E X^{2j} = 3^j / (2j + 1) on [-sqrt3, sqrt3]
  for (unsigned j = 1; 2 * j <= kMaxMomentOrder; ++j) {
    d.coord_moments_[2 * j] = rational_pow(Rational(3), j) / Rational(2 * j + 1);
  }
  return d;
}

DistributionSpec DistributionSpec::three_point(std::size_t k, const Rational& a_squared) {
  if (a_squared < 1) throw std::invalid_argument("three_point: a^2 must be >= 1");
  DistributionSpec d(LawKind::ThreePoint, "three_point", k, a_squared);
  double a = std::sqrt(static_cast<double>(a_squared));
  double p = static_cast<double>(Rational(1) / (2 * a_squared));
  if (a_squared == 1) {
    d.support_ = {-a, a};
    d.probs_ = {0.5, 0.5};
  } else {
    d.support_ = {-a, 0.0, a};
    d.probs_ = {p, 1.0 - 2.0 * p, p};
  }
  // E X^{2j} = 2 * (1/(2a^2)) * a^{2j} = (a^2)^{j-1}
  for (unsigned j = 1; 2 * j <= kMaxMomentOrder; ++j) {
    d.coord_moments_[2 * j] = rational_pow(a_squared, j - 1);
  }
  return d;
}

DistributionSpec DistributionSpec::gaussian(std::size_t k) {
  DistributionSpec d(LawKind::Gaussian, "gaussian", k, Rational(0));
  Rational dfact(1);
  for (unsigned j = 1; 2 * j <= kMaxMomentOrder; ++j) {
    dfact *= (2 * j - 1);
    d.coord_moments_[2 * j] = dfact;
  }
  return d;
}

DistributionSpec DistributionSpec::shifted_bernoulli(std::size_t k, const Rational& upper) {
  if (upper <= 0) throw std::invalid_argument("shifted_bernoulli: upper value must be > 0");
  DistributionSpec d(LawKind::ShiftedBernoulli, "shifted_bernoulli", k, upper);
  const Rational a2 = upper * upper;
  const Rational p = Rational(1) / (1 + a2);
  const Rational lower = Rational(-1) / upper;
  d.support_ = {static_cast<double>(lower), static_cast<double>(upper)};
  d.probs_ = {static_cast<double>(1 - p), static_cast<double>(p)};
  for (unsigned q = 1; q <= kMaxMomentOrder; ++q) {
    d.coord_moments_[q] = p * rational_pow(upper, q) + (1 - p) * rational_pow(lower, q);
  }
  return d;
}

DistributionSpec DistributionSpec::from_name(std::string_view name, std::size_t k, std::string_view param) {
  if (name == "rademacher") return rademacher(k);
  if (name == "uniform") return uniform(k);
  if (name == "gaussian") return gaussian(k);
  if (name == "three_point") {
    return three_point(k, param.empty() ? Rational(2) : parse_decimal_rational(param));
  }
  if (name == "shifted_bernoulli") {
    return shifted_bernoulli(k, param.empty() ? Rational(2) : parse_decimal_rational(param));
  }
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

std::string DistributionSpec::parameter_text() const {
  if (kind_ == LawKind::ThreePoint || kind_ == LawKind::ShiftedBernoulli) return format_rational(param_);
  return "";
}

double DistributionSpec::sample_coordinate(Rng& rng) const {
  double v = 0.0;
  sample(rng, {&v, 1});
  return v;
}

void DistributionSpec::sample(Rng& rng, std::span<double> out) const {
  switch (kind_) {
    case LawKind::Rademacher:
      // One raw draw supplies 64 signs.
      for (std::size_t i = 0; i < out.size(); i += 64) {
        const std::uint64_t bits = rng();
        const std::size_t len = std::min<std::size_t>(64, out.size() - i);
        for (std::size_t j = 0; j < len; ++j) out[i + j] = ((bits >> j) & 1u) ? 1.0 : -1.0;
      }
      break;
    case LawKind::Uniform: {
      const double s = std::sqrt(3.0);
      std::uniform_real_distribution<double> u(-s, s);
      for (double& v : out) v = u(rng);
      break;
    }
    case LawKind::Gaussian: {
      std::normal_distribution<double> g;
      for (double& v : out) v = g(rng);
      break;
    }
    case LawKind::ThreePoint:
    case LawKind::ShiftedBernoulli: {
      // Inverse CDF on one raw 64-bit draw against cumulative thresholds.
      std::uint64_t cut[2] = {UINT64_MAX, UINT64_MAX};
      double cum = 0.0;
      for (std::size_t i = 0; i + 1 < probs_.size(); ++i) {
        cum += probs_[i];
        cut[i] = cum >= 1.0 ? UINT64_MAX : static_cast<std::uint64_t>(std::ldexp(cum, 64));
      }
      for (double& v : out) {
        const std::uint64_t r = rng();
        v = support_[static_cast<std::size_t>(r >= cut[0]) + static_cast<std::size_t>(r >= cut[1])];
      }
      break;
    }
  }
}

}  // namespace edgeworth
