#include "edgeworth/weighted_sums.hpp"

#include "edgeworth/tensor_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace edgeworth {

namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void fill_rows(const DistributionSpec& spec, const ThetaVector& theta, Rng& rng, std::size_t rows,
               std::span<double> out, std::vector<double>& scratch) {
  const std::size_t k = spec.dim();
  const std::size_t n = theta.size();
  scratch.resize(n * k);
  for (std::size_t r = 0; r < rows; ++r) {
    spec.sample(rng, scratch);
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += theta[j] * scratch[j * k + c];
      out[r * k + c] = s;
    }
  }
}

std::size_t block_count(std::size_t rows) { return (rows + kSampleBlock - 1) / kSampleBlock; }

}  // namespace

ThetaVector::ThetaVector(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw std::invalid_argument("theta: empty weight vector");
  double sq = 0.0;
  for (double w : w_) sq += w * w;
  if (!(std::abs(sq - 1.0) <= 1e-12)) throw std::invalid_argument("theta: weights are not on the unit sphere");
}

ThetaVector ThetaVector::equal(std::size_t n) {
  return ThetaVector(std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n))));
}

double ThetaVector::power_sum(unsigned p) const {
  double s = 0.0;
  for (double w : w_) s += std::pow(w, static_cast<int>(p));
  return s;
}

double ThetaVector::abs_power_sum(unsigned p) const {
  double s = 0.0;
  for (double w : w_) s += std::pow(std::abs(w), static_cast<int>(p));
  return s;
}

std::string ThetaVector::to_string() const { return format_real_list(w_); }

ThetaVector ThetaVector::parse(std::string_view text) { return ThetaVector(parse_real_list(text)); }

ThetaVector ThetaVector::read(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#') return parse(line);
  }
  throw std::invalid_argument("theta: no weight line found");
}

ThetaVector sample_sphere(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_sphere: n must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> z(n);
  double sq = 0.0;
  do {
    sq = 0.0;
    for (double& v : z) {
      v = g(rng);
      sq += v * v;
    }
  } while (sq == 0.0);
  const double norm = std::sqrt(sq);
  for (double& v : z) v /= norm;
  // One renormalization pass keeps |theta| = 1 to a few ulps.
  sq = 0.0;
  for (double v : z) sq += v * v;
  const double fix = 1.0 / std::sqrt(sq);
  for (double& v : z) v *= fix;
  return ThetaVector(std::move(z));
}

SampleMatrix sample_weighted_sum(const DistributionSpec& spec, const ThetaVector& theta, std::uint64_t seed,
                                 std::size_t batch) {
  SampleMatrix out{spec.dim(), std::vector<double>(batch * spec.dim())};
  const std::size_t blocks = block_count(batch);
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b) {
      Rng rng = make_substream(seed, b);
      const std::size_t first = b * kSampleBlock;
      const std::size_t rows = std::min(kSampleBlock, batch - first);
      fill_rows(spec, theta, rng, rows, std::span(out.data).subspan(first * spec.dim(), rows * spec.dim()),
                scratch);
    }
  }
  return out;
}

SampleMatrix sample_weighted_sum_serial(const DistributionSpec& spec, const ThetaVector& theta,
                                        std::uint64_t seed, std::size_t batch) {
  SampleMatrix out{spec.dim(), std::vector<double>(batch * spec.dim())};
  std::vector<double> scratch;
  for (std::size_t b = 0; b < block_count(batch); ++b) {
    Rng rng = make_substream(seed, b);
    const std::size_t first = b * kSampleBlock;
    const std::size_t rows = std::min(kSampleBlock, batch - first);
    fill_rows(spec, theta, rng, rows, std::span(out.data).subspan(first * spec.dim(), rows * spec.dim()), scratch);
  }
  return out;
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t samples, double z) {
  if (samples == 0) return {0.0, 1.0};
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::vector<ProbabilityEstimate> empirical_probabilities(const DistributionSpec& spec, const ThetaVector& theta,
                                                         std::span<const ConvexSet> sets, std::size_t samples,
                                                         std::uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("empirical_probability: requires N >= 1000");
  for (const auto& set : sets) {
    validate_set(set);
    if (set_dim(set) != spec.dim()) throw std::invalid_argument("empirical_probability: set dimension mismatch");
  }
  const std::size_t k = spec.dim();
  const std::size_t m = sets.size();
  const std::size_t blocks = block_count(samples);
  std::vector<std::uint64_t> hits(blocks * m, 0);
#pragma omp parallel
  {
    std::vector<double> scratch;
    std::vector<double> rows_buf(kSampleBlock * k);
#pragma omp for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b) {
      Rng rng = make_substream(seed, b);
      const std::size_t rows = std::min(kSampleBlock, samples - b * kSampleBlock);
      fill_rows(spec, theta, rng, rows, rows_buf, scratch);
      for (std::size_t s = 0; s < m; ++s) {
        std::uint64_t h = 0;
        if (const auto* box = std::get_if<Box>(&sets[s])) {
          // Same closed-box test as contains(), without the per-row dispatch.
          for (std::size_t r = 0; r < rows; ++r) {
            bool in = true;
            for (std::size_t c = 0; c < k; ++c) {
              const double x = rows_buf[r * k + c];
              in &= (x >= box->lo[c]) & (x <= box->hi[c]);
            }
            h += in;
          }
        } else {
          for (std::size_t r = 0; r < rows; ++r) {
            h += contains(sets[s], std::span<const double>(rows_buf.data() + r * k, k));
          }
        }
        hits[b * m + s] = h;
      }
    }
  }
  std::vector<ProbabilityEstimate> out(m);
  for (std::size_t s = 0; s < m; ++s) {
    auto& est = out[s];
    est.samples = samples;
    for (std::size_t b = 0; b < blocks; ++b) est.hits += hits[b * m + s];
    est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
    std::tie(est.lower, est.upper) = wilson_interval(est.hits, est.samples);
  }
  return out;
}

ProbabilityEstimate empirical_probability(const DistributionSpec& spec, const ThetaVector& theta,
                                          const ConvexSet& set, std::size_t samples, std::uint64_t seed) {
  return empirical_probabilities(spec, theta, std::span<const ConvexSet>(&set, 1), samples, seed).front();
}

namespace {

void enumerate_half(std::span<const double> theta, std::span<const double> support, std::span<const double> probs,
                    std::vector<double>& values, std::vector<double>& weights) {
  values.assign(1, 0.0);
  weights.assign(1, 1.0);
  for (double t : theta) {
    std::vector<double> nv, nw;
    nv.reserve(values.size() * support.size());
    nw.reserve(values.size() * support.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t s = 0; s < support.size(); ++s) {
        nv.push_back(values[i] + t * support[s]);
        nw.push_back(weights[i] * probs[s]);
      }
    }
    values.swap(nv);
    weights.swap(nw);
  }
}

double boundary_tolerance(const DistributionSpec& spec, const ThetaVector& theta) {
  double max_abs = 0.0;
  for (double s : spec.support()) max_abs = std::max(max_abs, std::abs(s));
  return 64.0 * std::numeric_limits<double>::epsilon() * theta.abs_power_sum(1) * max_abs;
}

void require_enumerable(const DistributionSpec& spec, const ThetaVector& theta) {
  if (!spec.discrete()) throw std::invalid_argument("exact enumeration needs a discrete spec");
  if (theta.size() > WeightedSumLaw::kMaxTerms) throw std::invalid_argument("exact enumeration: n too large");
  const std::size_t half = (theta.size() + 1) / 2;
  double atoms = std::pow(static_cast<double>(spec.support().size()), static_cast<double>(half));
  if (atoms > static_cast<double>(WeightedSumLaw::kMaxHalfAtoms)) {
    throw std::invalid_argument("exact enumeration: n too large for this support size");
  }
}

}  // namespace

WeightedSumLaw::WeightedSumLaw(const DistributionSpec& spec, const ThetaVector& theta) {
  require_enumerable(spec, theta);
  const std::size_t n = theta.size();
  const std::size_t split = n / 2;
  auto w = theta.weights();
  std::vector<double> right_values, right_probs;
#pragma omp parallel sections if (n > 16)
  {
#pragma omp section
    enumerate_half(w.subspan(0, split), spec.support(), spec.probabilities(), left_values_, left_probs_);
#pragma omp section
    enumerate_half(w.subspan(split), spec.support(), spec.probabilities(), right_values, right_probs);
  }
  std::vector<std::size_t> order(right_values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return right_values[a] < right_values[b]; });
  right_sorted_.resize(order.size());
  right_cum_.assign(order.size() + 1, 0.0);
  CompensatedSum cum;
  for (std::size_t i = 0; i < order.size(); ++i) {
    right_sorted_[i] = right_values[order[i]];
    cum.add(right_probs[order[i]]);
    right_cum_[i + 1] = cum.value();
  }
  tol_ = boundary_tolerance(spec, theta);
}

double WeightedSumLaw::probability(double lo, double hi) const {
  if (lo > hi) throw std::invalid_argument("WeightedSumLaw: lo > hi");
  if (std::isinf(lo) && std::isinf(hi)) return 1.0;
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (left_values_.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static) if (blocks > 2)
  for (std::size_t b = 0; b < blocks; ++b) {
    CompensatedSum acc;
    const std::size_t end = std::min(left_values_.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const double v = left_values_[i];
      const auto upper = std::upper_bound(right_sorted_.begin(), right_sorted_.end(), hi - v + tol_);
      const auto lower = std::isinf(lo) ? right_sorted_.begin()
                                        : std::lower_bound(right_sorted_.begin(), right_sorted_.end(), lo - v - tol_);
      if (upper <= lower) continue;
      const double mass = right_cum_[upper - right_sorted_.begin()] - right_cum_[lower - right_sorted_.begin()];
      acc.add(left_probs_[i] * mass);
    }
    partial[b] = acc.value();
  }
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return std::clamp(total.value(), 0.0, 1.0);
}

double WeightedSumLaw::cdf(double x) const { return probability(-std::numeric_limits<double>::infinity(), x); }

namespace {

void check_box(const DistributionSpec& spec, const Box& box) {
  validate_set(box);
  if (box.lo.size() != spec.dim()) throw std::invalid_argument("exact_box_probability: box dimension mismatch");
}

}  // namespace

double exact_box_probability(const DistributionSpec& spec, const ThetaVector& theta, const Box& box) {
  check_box(spec, box);
  const WeightedSumLaw law(spec, theta);
  double p = 1.0;
  for (std::size_t c = 0; c < spec.dim(); ++c) p *= law.probability(box.lo[c], box.hi[c]);
  return p;
}

double exact_box_probability_reference(const DistributionSpec& spec, const ThetaVector& theta, const Box& box) {
  check_box(spec, box);
  if (!spec.discrete()) throw std::invalid_argument("exact enumeration needs a discrete spec");
  const std::size_t n = theta.size();
  const std::size_t s = spec.support().size();
  if (std::pow(static_cast<double>(s), static_cast<double>(n)) > 1e8) {
    throw std::invalid_argument("reference enumeration: too many patterns");
  }
  const double tol = boundary_tolerance(spec, theta);
  double result = 1.0;
  for (std::size_t c = 0; c < spec.dim(); ++c) {
    CompensatedSum acc;
    std::vector<std::size_t> digit(n, 0);
    while (true) {
      double sum = 0.0, prob = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        sum += theta[j] * spec.support()[digit[j]];
        prob *= spec.probabilities()[digit[j]];
      }
      if (sum >= box.lo[c] - tol && sum <= box.hi[c] + tol) acc.add(prob);
      std::size_t j = 0;
      while (j < n && ++digit[j] == s) digit[j++] = 0;
      if (j == n) break;
    }
    result *= acc.value();
  }
  return result;
}

}  // namespace edgeworth
