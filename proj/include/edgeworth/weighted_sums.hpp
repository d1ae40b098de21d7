#pragma once

#include "edgeworth/convex_set.hpp"
#include "edgeworth/distributions.hpp"

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgeworth {

// Weights on the unit sphere S^{n-1}.
class ThetaVector {
 public:
  // Throws std::invalid_argument unless sum w_j^2 = 1 within 1e-12.
  explicit ThetaVector(std::vector<double> weights);

  static ThetaVector equal(std::size_t n);

  std::size_t size() const { return w_.size(); }
  std::span<const double> weights() const { return w_; }
  double operator[](std::size_t j) const { return w_[j]; }

  // sum_j theta_j^p, sign kept for odd p.
  double power_sum(unsigned p) const;
  // l_p(theta) = sum_j |theta_j|^p.
  double abs_power_sum(unsigned p) const;

  // One line, comma separated, 17 significant digits.
  std::string to_string() const;
  static ThetaVector parse(std::string_view text);
  static ThetaVector read(std::istream& is);

 private:
  std::vector<double> w_;
};

// theta = Z / |Z| for a standard Gaussian n-vector Z.
ThetaVector sample_sphere(std::size_t n, std::uint64_t seed);

// Rows per random substream in the samplers below; results do not depend on
// the number of threads.
inline constexpr std::size_t kSampleBlock = 4096;

// i.i.d. realizations of sum_j theta_j X_j. OpenMP over sample blocks.
SampleMatrix sample_weighted_sum(const DistributionSpec& spec, const ThetaVector& theta, std::uint64_t seed,
                                 std::size_t batch);
// Single-threaded reference producing identical output.
SampleMatrix sample_weighted_sum_serial(const DistributionSpec& spec, const ThetaVector& theta,
                                        std::uint64_t seed, std::size_t batch);

struct ProbabilityEstimate {
  double estimate = 0.0;
  double lower = 0.0;  // Wilson 95% interval
  double upper = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t samples, double z = 1.959963984540054);

// Fraction of N simulated sums inside the set. Requires N >= 1000.
ProbabilityEstimate empirical_probability(const DistributionSpec& spec, const ThetaVector& theta,
                                          const ConvexSet& set, std::size_t samples, std::uint64_t seed);
// The same estimate for every set of a family from one simulated batch; entry
// i equals empirical_probability(spec, theta, sets[i], samples, seed).
std::vector<ProbabilityEstimate> empirical_probabilities(const DistributionSpec& spec, const ThetaVector& theta,
                                                         std::span<const ConvexSet> sets, std::size_t samples,
                                                         std::uint64_t seed);

// Exact law of sum_j theta_j X_j for one coordinate of a discrete spec, built
// by meet-in-the-middle: atoms of the first half are kept as a list, atoms of
// the second half sorted with prefix probabilities, so each interval query is
// one binary search per left atom.
//
// Intervals are closed: atoms within 64 eps * sum_j |theta_j| * max|support|
// of an endpoint count as inside.
class WeightedSumLaw {
 public:
  static constexpr std::size_t kMaxTerms = 26;
  static constexpr std::size_t kMaxHalfAtoms = std::size_t{1} << 20;

  // Throws std::invalid_argument for continuous specs or when n or the
  // half-enumeration size exceeds the limits above.
  WeightedSumLaw(const DistributionSpec& spec, const ThetaVector& theta);

  double probability(double lo, double hi) const;
  double cdf(double x) const;
  double tolerance() const { return tol_; }
  std::size_t atom_count() const { return left_values_.size() * right_sorted_.size(); }

 private:
  std::vector<double> left_values_;
  std::vector<double> left_probs_;
  std::vector<double> right_sorted_;
  std::vector<double> right_cum_;  // right_cum_[i] = P(right sum among first i sorted atoms)
  double tol_ = 0.0;
};

// P(sum_j theta_j X_j in box); coordinates are independent, so the box
// probability is the product of one-dimensional interval probabilities.
double exact_box_probability(const DistributionSpec& spec, const ThetaVector& theta, const Box& box);

// Brute-force reference: enumerates all support^n sign patterns directly.
// Intended for tests (n <= 16).
double exact_box_probability_reference(const DistributionSpec& spec, const ThetaVector& theta, const Box& box);

}  // namespace edgeworth
