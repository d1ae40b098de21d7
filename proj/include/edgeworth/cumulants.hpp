#pragma once

#include "edgeworth/tensor_table.hpp"

#include <memory>
#include <span>
#include <tuple>
#include <vector>

namespace edgeworth {

namespace detail {

// Multiplication plan for power series in k variables truncated at total
// degree m: every (i, j, target) with deg(i) + deg(j) <= m.
struct ProductPlan {
  std::shared_ptr<const IndexSpace> space;  // degrees 0..m
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> terms;
};

std::shared_ptr<const ProductPlan> product_plan(std::size_t k, unsigned m);

template <class T>
std::vector<T> series_multiply(const ProductPlan& plan, const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out(a.size(), T(0));
  for (const auto& [i, j, target] : plan.terms) {
    if (a[i] == 0 || b[j] == 0) continue;
    out[target] += a[i] * b[j];
  }
  return out;
}

// Coefficients c_alpha = table_alpha / alpha! laid out on the degree-0..m space
// (the constant term is 0).
template <class T, class Tag>
std::vector<T> to_series(const ProductPlan& plan, const TensorTable<T, Tag>& table) {
  std::vector<T> s(plan.space->size(), T(0));
  for (std::size_t i = 0; i < table.size(); ++i) {
    const MultiIndex& alpha = table.indices()[i];
    s[plan.space->position(alpha)] = table.at_position(i) / T(mi_factorial(alpha));
  }
  return s;
}

template <class T, class Tag>
TensorTable<T, Tag> from_series(const ProductPlan& plan, const std::vector<T>& s, std::size_t k, unsigned m) {
  TensorTable<T, Tag> table(k, m);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const MultiIndex& alpha = table.indices()[i];
    table.at_position(i) = s[plan.space->position(alpha)] * T(mi_factorial(alpha));
  }
  return table;
}

}  // namespace detail

// Cumulants from moments through the formal identity
//   sum_nu kappa_nu t^nu/nu! = sum_{s>=1} (-1)^{s+1}/s (sum_nu mu_nu t^nu/nu!)^s
// with every series truncated at total degree m. Exact when T is Rational.
template <class T>
CumulantSet<T> moments_to_cumulants(const MomentSet<T>& ms) {
  const std::size_t k = ms.dim();
  const unsigned m = ms.max_order();
  auto plan = detail::product_plan(k, m);
  const std::vector<T> u = detail::to_series(*plan, ms);
  std::vector<T> power = u;
  std::vector<T> log_series(u.size(), T(0));
  for (unsigned s = 1; s <= m; ++s) {
    if (s > 1) power = detail::series_multiply(*plan, power, u);
    const T coeff = (s % 2 == 1 ? T(1) : T(-1)) / T(s);
    for (std::size_t i = 0; i < power.size(); ++i) {
      if (power[i] != 0) log_series[i] += coeff * power[i];
    }
  }
  return detail::from_series<T, CumulantTag>(*plan, log_series, k, m);
}

// Moments from cumulants: the exponential series sum_{s>=1} K^s / s!.
template <class T>
MomentSet<T> cumulants_to_moments(const CumulantSet<T>& cs) {
  const std::size_t k = cs.dim();
  const unsigned m = cs.max_order();
  auto plan = detail::product_plan(k, m);
  const std::vector<T> kseries = detail::to_series(*plan, cs);
  std::vector<T> power = kseries;
  std::vector<T> exp_series(kseries.size(), T(0));
  T factorial(1);
  for (unsigned s = 1; s <= m; ++s) {
    if (s > 1) power = detail::series_multiply(*plan, power, kseries);
    factorial *= T(s);
    for (std::size_t i = 0; i < power.size(); ++i) {
      if (power[i] != 0) exp_series[i] += power[i] / factorial;
    }
  }
  return detail::from_series<T, MomentTag>(*plan, exp_series, k, m);
}

// Signed power sum sum_j theta_j^p.
double theta_power_sum(std::span<const double> theta, unsigned p);

// Cumulants of sum_j theta_j X_j for i.i.d. X_j: kappa_nu * sum_j theta_j^{|nu|}
// (odd powers keep their sign). Throws std::invalid_argument unless
// sum theta_j^2 = 1 within 1e-12.
CumulantSet<double> weighted_sum_cumulants(const CumulantSet<double>& cs, std::span<const double> theta);

// theta-averaged scale: the sphere average of sum_j theta_j^p to leading
// order, (p-1)!! n^{1-p/2} for even p and 0 for odd p (3/n at p = 4).
double averaged_power_sum(unsigned p, std::size_t n);

CumulantSet<double> averaged_sum_cumulants(const CumulantSet<double>& cs, std::size_t n);

}  // namespace edgeworth
