#include "edgeworth/cumulants.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace edgeworth {

namespace detail {

std::shared_ptr<const ProductPlan> product_plan(std::size_t k, unsigned m) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const ProductPlan>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(k, m);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto plan = std::make_shared<ProductPlan>();
  plan->space = IndexSpace::get(k, 0, m);
  const auto& idx = plan->space->indices();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (idx[i].degree() + idx[j].degree() > m) continue;
      plan->terms.emplace_back(i, j, plan->space->position(idx[i] + idx[j]));
    }
  }
  cache.emplace(key, plan);
  return plan;
}

}  // namespace detail

double theta_power_sum(std::span<const double> theta, unsigned p) {
  double s = 0.0;
  for (double t : theta) s += std::pow(t, static_cast<int>(p));
  return s;
}

CumulantSet<double> weighted_sum_cumulants(const CumulantSet<double>& cs, std::span<const double> theta) {
  if (theta.empty() || std::abs(theta_power_sum(theta, 2) - 1.0) > 1e-12) {
    throw std::invalid_argument("weighted_sum_cumulants: theta is not on the unit sphere");
  }
  std::vector<double> scale(cs.max_order() + 1, 0.0);
  for (unsigned p = 1; p <= cs.max_order(); ++p) scale[p] = theta_power_sum(theta, p);
  scale[2] = 1.0;
  CumulantSet<double> out(cs.dim(), cs.max_order());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    out.at_position(i) = cs.at_position(i) * scale[cs.indices()[i].degree()];
  }
  return out;
}

double averaged_power_sum(unsigned p, std::size_t n) {
  if (n == 0) throw std::invalid_argument("averaged_power_sum: n must be >= 1");
  if (p % 2 == 1) return 0.0;
  double dfact = 1.0;
  for (unsigned j = p - 1; j > 1; j -= 2) dfact *= j;
  return dfact * std::pow(static_cast<double>(n), 1.0 - p / 2.0);
}

CumulantSet<double> averaged_sum_cumulants(const CumulantSet<double>& cs, std::size_t n) {
  CumulantSet<double> out(cs.dim(), cs.max_order());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    out.at_position(i) = cs.at_position(i) * averaged_power_sum(cs.indices()[i].degree(), n);
  }
  return out;
}

}  // namespace edgeworth
