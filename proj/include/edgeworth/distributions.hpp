#pragma once

#include "edgeworth/rational.hpp"
#include "edgeworth/rng.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgeworth {

// Row-major block of k-vectors.
struct SampleMatrix {
  std::size_t k = 1;
  std::vector<double> data;

  std::size_t rows() const { return k == 0 ? 0 : data.size() / k; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * k, k}; }
  std::span<double> row(std::size_t i) { return {data.data() + i * k, k}; }
};

enum class LawKind { Rademacher, Uniform, ThreePoint, Gaussian, ShiftedBernoulli };

// Product-form law on R^k: coordinates are i.i.d. copies of a standardized
// one-dimensional law. Every catalog law has exact rational moments.
class DistributionSpec {
 public:
  static constexpr unsigned kMaxMomentOrder = 8;

  // +-1 with probability 1/2 each.
  static DistributionSpec rademacher(std::size_t k);
  // Uniform on [-sqrt3, sqrt3].
  static DistributionSpec uniform(std::size_t k);
  // {-a, 0, a} with P(+-a) = 1/(2a^2); the fourth moment is a^2 (>= 1).
  static DistributionSpec three_point(std::size_t k, const Rational& a_squared);
  static DistributionSpec gaussian(std::size_t k);
  // {a, -1/a} with P(a) = 1/(1+a^2). Third moment a - 1/a, nonzero unless a = 1.
  static DistributionSpec shifted_bernoulli(std::size_t k, const Rational& upper);

  // Names: rademacher, uniform, three_point (param a^2, default 2), gaussian,
  // shifted_bernoulli (param a, default 2). Params are decimal or p/q text.
  static DistributionSpec from_name(std::string_view name, std::size_t k, std::string_view param = {});

  LawKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Rational& parameter() const { return param_; }
  std::string parameter_text() const;
  std::size_t dim() const { return k_; }

  bool standardized() const { return true; }
  bool vanishing_third_moments() const { return coord_moments_[3] == 0; }
  bool discrete() const { return !support_.empty(); }

  // Per-coordinate support and probabilities (empty for continuous laws).
  std::span<const double> support() const { return support_; }
  std::span<const double> probabilities() const { return probs_; }

  // E X^p for one coordinate, p = 0..kMaxMomentOrder.
  const std::vector<Rational>& coordinate_moments() const { return coord_moments_; }

  double sample_coordinate(Rng& rng) const;
  void sample(Rng& rng, std::span<double> out) const;

 private:
  DistributionSpec(LawKind kind, std::string name, std::size_t k, Rational param);

  LawKind kind_;
  std::string name_;
  std::size_t k_;
  Rational param_;
  std::vector<double> support_;
  std::vector<double> probs_;
  std::vector<Rational> coord_moments_;
};

// Parses "2", "-1.25", "5/2" into an exact rational.
Rational parse_decimal_rational(std::string_view text);

}  // namespace edgeworth
