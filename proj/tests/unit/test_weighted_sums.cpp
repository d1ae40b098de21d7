#include <doctest.h>

#include "edgeworth/moments.hpp"
#include "edgeworth/rng.hpp"
#include "edgeworth/weighted_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

using namespace edgeworth;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const double kHalf = std::sqrt(0.5);

ThetaVector two_equal() { return ThetaVector({kHalf, kHalf}); }

}  // namespace

TEST_SUITE("weighted_sums") {

TEST_CASE("ThetaVector") {
  auto t = ThetaVector::equal(4);
  CHECK(t.size() == 4);
  CHECK(t[2] == 0.5);
  CHECK(t.power_sum(4) == doctest::Approx(0.25));
  CHECK(ThetaVector({0.6, -0.8}).power_sum(3) == doctest::Approx(0.216 - 0.512));
  CHECK(ThetaVector({0.6, -0.8}).abs_power_sum(3) == doctest::Approx(0.216 + 0.512));
  CHECK_THROWS(ThetaVector({1.0, 1e-5}));
  CHECK_THROWS(ThetaVector(std::vector<double>{}));
  auto back = ThetaVector::parse(ThetaVector({0.6, -0.8}).to_string());
  CHECK(back[1] == -0.8);
  std::istringstream is("# weights\n0.6,0.8\n");
  CHECK(ThetaVector::read(is)[0] == 0.6);
}

TEST_CASE("sample_sphere") {
  auto one = sample_sphere(1, 5);
  CHECK(std::abs(one[0]) == 1.0);
  CHECK_THROWS(sample_sphere(0, 1));
  const std::size_t n = 6, draws = 100000;
  double m2 = 0, m4 = 0, worst = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    auto t = sample_sphere(n, substream_seed(77, d));
    double sq = 0;
    for (std::size_t j = 0; j < n; ++j) sq += t[j] * t[j];
    worst = std::max(worst, std::abs(sq - 1.0));
    m2 += t[0] * t[0];
    m4 += std::pow(t[0], 4);
  }
  CHECK(worst <= 1e-12);
  m2 /= draws;
  m4 /= draws;
  // Var(theta_1^2) = 3/(n(n+2)) - 1/n^2, Var(theta_1^4) = 105/(n(n+2)(n+4)(n+6)) - (3/(n(n+2)))^2
  const double e2 = 1.0 / n, e4 = 3.0 / (n * (n + 2.0));
  const double v2 = e4 - e2 * e2, v4 = 105.0 / (n * (n + 2.0) * (n + 4.0) * (n + 6.0)) - e4 * e4;
  CHECK(std::abs(m2 - e2) < 5 * std::sqrt(v2 / draws));
  CHECK(std::abs(m4 - e4) < 5 * std::sqrt(v4 / draws));
  CHECK(sample_sphere(9, 3)[4] == sample_sphere(9, 3)[4]);
}

TEST_CASE("sample_weighted_sum") {
  const auto theta = ThetaVector({0.6, 0.0, 0.8});
  const std::size_t N = 200000;
  auto par = sample_weighted_sum(DistributionSpec::gaussian(2), theta, 4, N);
  auto ser = sample_weighted_sum_serial(DistributionSpec::gaussian(2), theta, 4, N);
  CHECK(par.data == ser.data);
  CHECK(par.rows() == N);
  auto m = empirical_moments(par, 4);
  CHECK(std::abs(m.at(MultiIndex{2, 0}) - 1.0) < 5 * std::sqrt(2.0 / N));
  CHECK(std::abs(m.at(MultiIndex{1, 1})) < 5 * std::sqrt(1.0 / N));
  CHECK(std::abs(m.at(MultiIndex{4, 0}) - 3.0) < 5 * std::sqrt(96.0 / N));

  auto e1 = sample_weighted_sum(DistributionSpec::shifted_bernoulli(1, 2), ThetaVector({1.0, 0.0}), 8, 5000);
  CHECK(std::all_of(e1.data.begin(), e1.data.end(), [](double v) { return v == 2.0 || v == -0.5; }));

  auto rad = sample_weighted_sum(DistributionSpec::rademacher(1), ThetaVector::equal(5), 6, N);
  double mean = 0;
  for (double v : rad.data) mean += v;
  CHECK(std::abs(mean / N) < 5 / std::sqrt(double(N)));
}

TEST_CASE("wilson interval") {
  auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo == doctest::Approx(0.403831).epsilon(1e-5));
  CHECK(hi == doctest::Approx(0.596169).epsilon(1e-5));
  auto [l0, h0] = wilson_interval(0, 1000);
  CHECK(l0 == doctest::Approx(0.0));
  CHECK(h0 > 0.0);
}

TEST_CASE("empirical_probability examples") {
  const auto rad = DistributionSpec::rademacher(1);
  auto full = empirical_probability(rad, two_equal(), Box::whole_space(1), 1000, 1);
  CHECK(full.estimate == 1.0);
  auto quarter = empirical_probability(rad, two_equal(), Box{{-kInf}, {0.0}}, 100000, 2);
  CHECK(quarter.lower <= 0.75);
  CHECK(quarter.upper >= 0.75);
  auto half = empirical_probability(DistributionSpec::gaussian(2), ThetaVector::equal(3),
                                    HalfSpace{{0.6, 0.8}, 0.0}, 100000, 3);
  CHECK(half.lower <= 0.5);
  CHECK(half.upper >= 0.5);
  CHECK_THROWS(empirical_probability(rad, two_equal(), Box::whole_space(1), 999, 1));
  CHECK_THROWS(empirical_probability(rad, two_equal(), Box::whole_space(2), 1000, 1));

  const std::vector<ConvexSet> family{Box{{-kInf}, {0.0}}, Box{{-0.5}, {0.5}}};
  auto both = empirical_probabilities(rad, ThetaVector::equal(7), family, 5000, 11);
  CHECK(both[1].hits == empirical_probability(rad, ThetaVector::equal(7), family[1], 5000, 11).hits);
}

TEST_CASE("exact_box_probability examples") {
  const auto rad = DistributionSpec::rademacher(1);
  CHECK(exact_box_probability(rad, two_equal(), Box{{-kInf}, {0.0}}) == 0.75);
  CHECK(exact_box_probability(rad, two_equal(), Box{{0.0}, {kInf}}) == 0.75);
  CHECK(exact_box_probability(rad, two_equal(), Box{{-kInf}, {-1e-3}}) == 0.25);

  const auto sb = DistributionSpec::shifted_bernoulli(1, 2);
  const ThetaVector e1({1.0, 0.0, 0.0});
  CHECK(exact_box_probability(sb, e1, Box{{-kInf}, {0.0}}) == doctest::Approx(0.8));
  CHECK(exact_box_probability(sb, e1, Box{{-kInf}, {2.0}}) == doctest::Approx(1.0));
  CHECK(exact_box_probability(sb, e1, Box{{-0.5}, {-0.5}}) == doctest::Approx(0.8));

  CHECK_THROWS(exact_box_probability(DistributionSpec::uniform(1), two_equal(), Box{{0.0}, {1.0}}));
  CHECK_THROWS(exact_box_probability(rad, ThetaVector::equal(27), Box{{0.0}, {1.0}}));
  CHECK_THROWS(WeightedSumLaw(DistributionSpec::three_point(1, 3), ThetaVector::equal(26)));
}

TEST_CASE("exact enumeration agrees with brute force") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const char* name : {"rademacher", "three_point", "shifted_bernoulli"}) {
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto spec = DistributionSpec::from_name(name, k, "3");
      for (std::size_t n : {1u, 3u, 8u, 11u}) {
        const auto theta = sample_sphere(n, rng());
        Box b{std::vector<double>(k), std::vector<double>(k)};
        for (std::size_t i = 0; i < k; ++i) {
          b.lo[i] = std::min(u(rng), 0.0);
          b.hi[i] = b.lo[i] + std::abs(u(rng)) + 0.1;
        }
        CHECK(std::abs(exact_box_probability(spec, theta, b) - exact_box_probability_reference(spec, theta, b)) <
              1e-14);
      }
    }
  }
}

TEST_CASE("invariants: permutation and symmetric boundary accounting") {
  const auto rad = DistributionSpec::rademacher(2);
  std::vector<double> w = {0.1, 0.5, -0.3, 0.7, 0.2};
  double sq = 0;
  for (double v : w) sq += v * v;
  for (double& v : w) v /= std::sqrt(sq);
  auto perm = w;
  std::reverse(perm.begin(), perm.end());
  const Box b{{-0.4, -kInf}, {0.9, 0.3}};
  CHECK(std::abs(exact_box_probability(rad, ThetaVector(w), b) - exact_box_probability(rad, ThetaVector(perm), b)) <
        1e-15);

  // Equal weights put an atom at 0 for even n; closed boxes count it on both sides:
  // P((-inf,0]^k) = P([0,inf)^k) = (1/2 + P(S=0)/2)^k.
  const ThetaVector eq = ThetaVector::equal(4);
  const double atom = 6.0 / 16.0;
  const double neg = exact_box_probability(rad, eq, Box{{-kInf, -kInf}, {0.0, 0.0}});
  const double pos = exact_box_probability(rad, eq, Box{{0.0, 0.0}, {kInf, kInf}});
  CHECK(neg == doctest::Approx(std::pow(0.5 + atom / 2, 2)).epsilon(1e-15));
  CHECK(pos == doctest::Approx(neg).epsilon(1e-15));
}

TEST_CASE("meet in the middle reaches n = 26") {
  const auto rad = DistributionSpec::rademacher(1);
  WeightedSumLaw law(rad, ThetaVector::equal(26));
  CHECK(law.atom_count() == (std::size_t{1} << 26));
  // S = (2B - 26)/sqrt(26), B ~ Bin(26, 1/2): P(S <= 0) = P(B <= 13)
  double p = 0, c = 1;
  for (int b = 0; b <= 13; ++b) {
    p += c;
    c = c * (26 - b) / (b + 1);
  }
  CHECK(law.cdf(0.0) == doctest::Approx(p / std::pow(2.0, 26)).epsilon(1e-14));
  CHECK(law.probability(-kInf, kInf) == 1.0);
}

TEST_CASE("Monte Carlo calibration against exact") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int covered = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const auto theta = sample_sphere(4 + t % 12, rng());
    const double a = u(rng);
    const Box b{{a}, {a + 1.0}};
    const double exact = exact_box_probability(DistributionSpec::rademacher(1), theta, b);
    auto est = empirical_probability(DistributionSpec::rademacher(1), theta, b, 20000, rng());
    covered += est.lower <= exact && exact <= est.upper;
  }
  CHECK(covered >= 34);
}

}  // TEST_SUITE
