#include "edgeworth/expansion.hpp"

#include <algorithm>
#include <cmath>

namespace edgeworth {

std::string to_string(SignConvention s) {
  return s == SignConvention::SubstitutionPlus ? "substitution-plus" : "paper-minus";
}

std::string to_string(ScaleConvention s) { return s == ScaleConvention::PerTheta ? "per-theta" : "averaged"; }

SignConvention parse_sign_convention(std::string_view text) {
  if (text == "plus" || text == "substitution-plus") return SignConvention::SubstitutionPlus;
  if (text == "minus" || text == "paper-minus") return SignConvention::PaperMinus;
  throw std::invalid_argument("unknown sign convention '" + std::string(text) + "'");
}

ScaleConvention parse_scale_convention(std::string_view text) {
  if (text == "theta" || text == "per-theta") return ScaleConvention::PerTheta;
  if (text == "averaged" || text == "3/n") return ScaleConvention::Averaged;
  throw std::invalid_argument("unknown scale convention '" + std::string(text) + "'");
}

double pr_density(unsigned r, const CumulantSet<double>& cs, std::span<const double> x, SignConvention sign) {
  const auto poly = phat_polynomial(r, cs);
  return sign_factor(sign) * hermite_combination(poly, x) * gaussian_pdf(x);
}

EdgeworthExpansion::EdgeworthExpansion(const CumulantSet<double>& sum_cumulants, unsigned order,
                                       SignConvention sign, ScaleConvention scale)
    : k_(sum_cumulants.dim()), order_(order), sign_(sign), scale_(scale) {
  if (order > kMaxOrder) throw std::invalid_argument("EdgeworthExpansion: order above 4");
  if (order > 0 && sum_cumulants.max_order() < order + 2) {
    throw std::invalid_argument("EdgeworthExpansion: cumulants needed to order s+2");
  }
  if (sum_cumulants.max_order() >= 2) {
    auto [b, e] = sum_cumulants.space().degree_range(2);
    for (std::size_t pos = b; pos < e; ++pos) {
      const MultiIndex& nu = sum_cumulants.indices()[pos];
      const bool pure = std::find(nu.exponents().begin(), nu.exponents().end(), 2u) != nu.exponents().end();
      if (std::abs(sum_cumulants.at_position(pos) - (pure ? 1.0 : 0.0)) > 1e-9) {
        throw std::invalid_argument("EdgeworthExpansion: covariance is not the identity");
      }
    }
  }
  FreqPolynomial<double> total(k_);
  for (unsigned r = 1; r <= order; ++r) total += phat_polynomial(r, sum_cumulants);
  const double s = sign_factor(sign);
  for (const auto& [nu, c] : total.terms()) {
    if (c == 0.0) continue;
    terms_.push_back({nu, s * c});
    max_degree_ = std::max(max_degree_, *std::max_element(nu.exponents().begin(), nu.exponents().end()));
  }
}

EdgeworthExpansion EdgeworthExpansion::for_weighted_sum(const CumulantSet<double>& summand,
                                                        std::span<const double> theta, unsigned order,
                                                        SignConvention sign) {
  return EdgeworthExpansion(weighted_sum_cumulants(summand, theta), order, sign, ScaleConvention::PerTheta);
}

EdgeworthExpansion EdgeworthExpansion::averaged(const CumulantSet<double>& summand, std::size_t n, unsigned order,
                                                SignConvention sign) {
  return EdgeworthExpansion(averaged_sum_cumulants(summand, n), order, sign, ScaleConvention::Averaged);
}

double EdgeworthExpansion::correction_factor(std::span<const double> x) const {
  if (x.size() != k_) throw std::invalid_argument("EdgeworthExpansion: dimension mismatch");
  const std::size_t stride = max_degree_ + 1;
  std::vector<double> he(k_ * stride);
  for (std::size_t i = 0; i < k_; ++i) hermite_values(max_degree_, x[i], {he.data() + i * stride, stride});
  double acc = 1.0;
  for (const auto& t : terms_) {
    double v = t.coefficient;
    for (std::size_t i = 0; i < k_; ++i) v *= he[i * stride + t.nu[i]];
    acc += v;
  }
  return acc;
}

double EdgeworthExpansion::density(std::span<const double> x) const {
  return gaussian_pdf(x) * correction_factor(x);
}

double expansion_density(const EdgeworthExpansion& e, std::span<const double> x) { return e.density(x); }

double closed_form_g_density_scaled(std::size_t k, const FourthMoments<double>& mu, double scale,
                                    std::span<const double> x, SignConvention sign) {
  return gaussian_pdf(x) * (1.0 + scale * closed_form_g_bracket<double>(k, mu, x, sign));
}

double closed_form_g_density(std::size_t k, const FourthMoments<double>& mu, std::size_t n,
                             std::span<const double> x, SignConvention sign) {
  if (n == 0) throw std::invalid_argument("closed_form_g_density: n must be >= 1");
  return closed_form_g_density_scaled(k, mu, 3.0 / static_cast<double>(n), x, sign);
}

double bobkov_g_cdf(double beta4, std::size_t n, double x) {
  if (n == 0) throw std::invalid_argument("bobkov_g_cdf: n must be >= 1");
  return std_normal_cdf(x) - (beta4 - 3.0) / (8.0 * static_cast<double>(n)) * (x * x * x - 3.0 * x) * std_normal_pdf(x);
}

}  // namespace edgeworth
