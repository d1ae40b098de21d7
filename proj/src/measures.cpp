#include "edgeworth/measures.hpp"

#include "edgeworth/rng.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgeworth {

namespace {

void check_dim(const EdgeworthExpansion& e, const ConvexSet& set) {
  validate_set(set);
  if (set_dim(set) != e.dim()) throw std::invalid_argument("measure: set dimension mismatch");
}

}  // namespace

double expansion_measure_box(const EdgeworthExpansion& e, const Box& box) {
  check_dim(e, box);
  const std::size_t k = e.dim();
  const unsigned maxd = e.max_hermite_degree();
  // integrals[i][n] = int_{lo_i}^{hi_i} He_n(x) phi(x) dx = (-1)^n int phi^{(n)}
  std::vector<std::vector<double>> integrals(k, std::vector<double>(maxd + 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (unsigned n = 0; n <= maxd; ++n) {
      const double v = gaussian_partial_integral(n, box.lo[i], box.hi[i]);
      integrals[i][n] = (n % 2 == 0) ? v : -v;
    }
  }
  double base = 1.0;
  for (std::size_t i = 0; i < k; ++i) base *= integrals[i][0];
  double corr = 0.0;
  for (const auto& t : e.terms()) {
    double v = t.coefficient;
    for (std::size_t i = 0; i < k; ++i) v *= integrals[i][t.nu[i]];
    corr += v;
  }
  return base + corr;
}

namespace {

struct BlockMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

BlockMoments mc_block(const EdgeworthExpansion& e, const ConvexSet& set, std::size_t draws, std::uint64_t seed,
                      std::size_t block) {
  Rng rng = make_substream(seed, block);
  std::normal_distribution<double> g;
  std::vector<double> z(e.dim());
  BlockMoments m;
  for (std::size_t i = 0; i < draws; ++i) {
    for (double& v : z) v = g(rng);
    if (!contains(set, z)) continue;
    const double w = e.correction_factor(z);
    m.sum += w;
    m.sum_sq += w * w;
  }
  return m;
}

McEstimate finish(const std::vector<BlockMoments>& blocks, std::size_t samples) {
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& b : blocks) {
    sum += b.sum;
    sum_sq += b.sum_sq;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

void check_mc(const EdgeworthExpansion& e, const ConvexSet& set, std::size_t samples) {
  if (samples < 1000) throw std::invalid_argument("expansion_measure_mc: requires N >= 1000");
  check_dim(e, set);
}

}  // namespace

McEstimate expansion_measure_mc(const EdgeworthExpansion& e, const ConvexSet& set, std::size_t samples,
                                std::uint64_t seed) {
  check_mc(e, set, samples);
  const std::size_t nblocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<BlockMoments> blocks(nblocks);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < nblocks; ++b) {
    blocks[b] = mc_block(e, set, std::min(kMcBlock, samples - b * kMcBlock), seed, b);
  }
  return finish(blocks, samples);
}

McEstimate expansion_measure_mc_serial(const EdgeworthExpansion& e, const ConvexSet& set, std::size_t samples,
                                       std::uint64_t seed) {
  check_mc(e, set, samples);
  const std::size_t nblocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<BlockMoments> blocks(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    blocks[b] = mc_block(e, set, std::min(kMcBlock, samples - b * kMcBlock), seed, b);
  }
  return finish(blocks, samples);
}

namespace {

// P(|Z - c| <= r) for Z ~ N(0, I_k). Rotating c onto the first axis leaves
// (Z_1 - |c|)^2 + chi^2_{k-1} <= r^2; integrate over Z_1.
double ball_measure(const Ball& ball) {
  const std::size_t k = ball.center.size();
  double d = 0.0;
  for (double c : ball.center) d += c * c;
  d = std::sqrt(d);
  const double r = ball.radius;
  if (k == 1) return gaussian_partial_integral(0, d - r, d + r);
  const double half_dof = 0.5 * static_cast<double>(k - 1);
  auto integrand = [&](double z1) {
    const double u = r * r - (z1 - d) * (z1 - d);
    if (u <= 0.0) return 0.0;
    return std_normal_pdf(z1) * boost::math::gamma_p(half_dof, 0.5 * u);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(integrand, d - r, d + r, 1e-14);
}

}  // namespace

double gaussian_measure(const ConvexSet& set) {
  validate_set(set);
  if (const auto* b = std::get_if<Box>(&set)) {
    double p = 1.0;
    for (std::size_t i = 0; i < b->lo.size(); ++i) p *= gaussian_partial_integral(0, b->lo[i], b->hi[i]);
    return p;
  }
  if (const auto* ball = std::get_if<Ball>(&set)) return ball_measure(*ball);
  return std_normal_cdf(std::get<HalfSpace>(set).offset);
}

double expansion_measure(const EdgeworthExpansion& e, const ConvexSet& set, std::size_t mc_samples,
                         std::uint64_t seed) {
  if (const auto* b = std::get_if<Box>(&set)) return expansion_measure_box(e, *b);
  check_dim(e, set);
  if (e.terms().empty()) return gaussian_measure(set);
  return expansion_measure_mc(e, set, mc_samples, seed).estimate;
}

}  // namespace edgeworth
