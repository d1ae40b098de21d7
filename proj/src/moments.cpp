#include "edgeworth/moments.hpp"

#include <algorithm>

namespace edgeworth {

MomentSet<double> empirical_moments(const SampleMatrix& samples, unsigned m) {
  const std::size_t n = samples.rows();
  if (n == 0) throw std::invalid_argument("empirical_moments: no samples");
  MomentSet<double> ms(samples.k, m);
  std::vector<double> sums(ms.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    auto x = samples.row(r);
    for (std::size_t i = 0; i < ms.size(); ++i) sums[i] += monomial(ms.indices()[i], x);
  }
  for (std::size_t i = 0; i < ms.size(); ++i) ms.at_position(i) = sums[i] / static_cast<double>(n);
  return ms;
}

double StandardizationReport::worst_violation() const {
  return std::max({mean_violation, covariance_violation, third_checked ? third_violation : 0.0});
}

}  // namespace edgeworth
