#pragma once

#include "edgeworth/distributions.hpp"
#include "edgeworth/tensor_table.hpp"

#include <stdexcept>

namespace edgeworth {

// Dense moments mu_alpha, 1 <= |alpha| <= m, of a product-form spec. The
// moment factorizes across coordinates.
template <class T>
MomentSet<T> analytic_moments(const DistributionSpec& spec, unsigned m) {
  if (m == 0 || m > DistributionSpec::kMaxMomentOrder) {
    throw std::invalid_argument("analytic_moments: order beyond the spec's moment rule");
  }
  MomentSet<T> ms(spec.dim(), m);
  const auto& coord = spec.coordinate_moments();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const MultiIndex& alpha = ms.indices()[i];
    Rational v(1);
    for (unsigned a : alpha.exponents()) v *= coord[a];
    ms.at_position(i) = scalar_from_rational<T>(v);
  }
  return ms;
}

// Sample means of monomial(alpha, X). Throws std::invalid_argument on empty input.
MomentSet<double> empirical_moments(const SampleMatrix& samples, unsigned m);

struct StandardizationReport {
  bool mean_ok = false;
  bool covariance_ok = false;
  bool third_checked = false;
  bool third_ok = false;
  double mean_violation = 0.0;
  double covariance_violation = 0.0;
  double third_violation = 0.0;

  bool all_ok() const { return mean_ok && covariance_ok && (!third_checked || third_ok); }
  double worst_violation() const;
};

// Mean zero, identity covariance and (for m >= 3) vanishing third moments,
// each up to an absolute tolerance.
template <class T>
StandardizationReport check_standardized(const MomentSet<T>& ms, double tol) {
  StandardizationReport r;
  auto worst = [&](unsigned degree, auto expected) {
    double w = 0.0;
    auto [b, e] = ms.space().degree_range(degree);
    for (std::size_t i = b; i < e; ++i) {
      T diff = ms.at_position(i) - expected(ms.indices()[i]);
      double d = std::abs(to_double(diff));
      if (d > w) w = d;
    }
    return w;
  };
  auto zero = [](const MultiIndex&) { return T(0); };
  r.mean_violation = worst(1, zero);
  r.mean_ok = r.mean_violation <= tol;
  if (ms.max_order() >= 2) {
    r.covariance_violation = worst(2, [](const MultiIndex& a) {
      for (unsigned e : a.exponents()) {
        if (e == 2) return T(1);
      }
      return T(0);
    });
    r.covariance_ok = r.covariance_violation <= tol;
  }
  if (ms.max_order() >= 3) {
    r.third_checked = true;
    r.third_violation = worst(3, zero);
    r.third_ok = r.third_violation <= tol;
  }
  return r;
}

}  // namespace edgeworth
