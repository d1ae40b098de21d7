#pragma once

#include "edgeworth/cumulants.hpp"
#include "edgeworth/hermite.hpp"
#include "edgeworth/tensor_table.hpp"

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace edgeworth {

// How the polynomial in (it) is realized as a density.
//   SubstitutionPlus: (it)^nu -> (-1)^{|nu|} D^nu phi = He_nu phi. Reproduces
//                     the classical Edgeworth density and Bobkov's G.
//   PaperMinus:       the same terms with a leading minus, as printed in the
//                     closed form of g.
enum class SignConvention { SubstitutionPlus, PaperMinus };

// How cumulants of sum_j theta_j X_j are scaled from those of X_1.
//   PerTheta: sum_j theta_j^{|nu|} for the given theta.
//   Averaged: sphere average to leading order, (p-1)!! n^{1-p/2} for even p,
//             0 for odd p; this is the 3/n of g at p = 4.
enum class ScaleConvention { PerTheta, Averaged };

std::string to_string(SignConvention s);
std::string to_string(ScaleConvention s);
SignConvention parse_sign_convention(std::string_view text);
ScaleConvention parse_scale_convention(std::string_view text);

inline double sign_factor(SignConvention s) { return s == SignConvention::SubstitutionPlus ? 1.0 : -1.0; }

// Polynomial in t: coefficient of t^nu for each nu present.
template <class T>
class FreqPolynomial {
 public:
  explicit FreqPolynomial(std::size_t k) : k_(k) {}

  std::size_t dim() const { return k_; }
  const std::map<MultiIndex, T>& terms() const { return terms_; }

  void add(const MultiIndex& nu, const T& c) {
    if (nu.dim() != k_) throw std::invalid_argument("FreqPolynomial: dimension mismatch");
    auto [it, inserted] = terms_.try_emplace(nu, c);
    if (!inserted) it->second += c;
  }

  T coefficient(const MultiIndex& nu) const {
    auto it = terms_.find(nu);
    return it == terms_.end() ? T(0) : it->second;
  }

  bool is_zero() const {
    for (const auto& [nu, c] : terms_) {
      if (c != 0) return false;
    }
    return true;
  }

  FreqPolynomial& operator+=(const FreqPolynomial& other) {
    for (const auto& [nu, c] : other.terms_) add(nu, c);
    return *this;
  }

 private:
  std::size_t k_;
  std::map<MultiIndex, T> terms_;
};

namespace detail {

template <class T>
void accumulate_phat(const CumulantSet<T>& cs, unsigned remaining, unsigned parts, const T& product,
                     const MultiIndex& nu_sum, const std::vector<T>& inv_part_factorial,
                     FreqPolynomial<T>& out) {
  if (remaining == 0) {
    out.add(nu_sum, product * inv_part_factorial[parts]);
    return;
  }
  for (unsigned i = 1; i <= remaining; ++i) {
    auto [b, e] = cs.space().degree_range(i + 2);
    for (std::size_t pos = b; pos < e; ++pos) {
      const T& kappa = cs.at_position(pos);
      if (kappa == 0) continue;
      const MultiIndex& nu = cs.indices()[pos];
      accumulate_phat(cs, remaining - i, parts + 1, T(product * kappa / T(mi_factorial(nu))), nu_sum + nu,
                      inv_part_factorial, out);
    }
  }
}

}  // namespace detail

// P-hat_r(t) = sum_{m=1}^r 1/m! sum over compositions i_1+..+i_m = r and
// tuples |nu_j| = i_j + 2 of prod_j kappa_{nu_j}/nu_j! t^{nu_1+..+nu_m}.
// Requires cumulants up to order r + 2.
template <class T>
FreqPolynomial<T> phat_polynomial(unsigned r, const CumulantSet<T>& cs) {
  if (r == 0) throw std::invalid_argument("phat_polynomial: r must be >= 1");
  if (cs.max_order() < r + 2) throw std::invalid_argument("phat_polynomial: cumulants needed to order r+2");
  std::vector<T> inv_fact(r + 1, T(1));
  T f(1);
  for (unsigned m = 1; m <= r; ++m) {
    f *= T(m);
    inv_fact[m] = T(1) / f;
  }
  FreqPolynomial<T> out(cs.dim());
  detail::accumulate_phat(cs, r, 0, T(1), MultiIndex::zero(cs.dim()), inv_fact, out);
  return out;
}

// sum_nu c_nu He_nu(x), i.e. the realized density of the polynomial divided by
// phi(x) under SubstitutionPlus.
template <class T>
T hermite_combination(const FreqPolynomial<T>& poly, std::span<const T> x) {
  if (x.size() != poly.dim()) throw std::invalid_argument("hermite_combination: dimension mismatch");
  T acc(0);
  for (const auto& [nu, c] : poly.terms()) {
    T term = c;
    for (std::size_t i = 0; i < x.size(); ++i) term *= hermite_coeffs(nu[i]).eval(x[i]);
    acc += term;
  }
  return acc;
}

// Density P_r(-phi)(x) of the r-th term.
double pr_density(unsigned r, const CumulantSet<double>& cs, std::span<const double> x,
                  SignConvention sign = SignConvention::SubstitutionPlus);

// density(x) = phi(x) * (1 + sum_terms coefficient * He_nu(x)).
struct HermiteTerm {
  MultiIndex nu;
  double coefficient;
};

// Psi_s = sum_{r=0}^s P_r(-Phi) around the standard Gaussian. Immutable; safe
// to evaluate concurrently.
class EdgeworthExpansion {
 public:
  static constexpr unsigned kMaxOrder = 4;

  // sum_cumulants are the cumulants of the normalized sum itself. Throws
  // std::invalid_argument if the order exceeds 4, cumulants stop below
  // order + 2, or the second-order cumulants deviate from the identity by more
  // than 1e-9.
  EdgeworthExpansion(const CumulantSet<double>& sum_cumulants, unsigned order,
                     SignConvention sign = SignConvention::SubstitutionPlus,
                     ScaleConvention scale = ScaleConvention::PerTheta);

  static EdgeworthExpansion for_weighted_sum(const CumulantSet<double>& summand, std::span<const double> theta,
                                             unsigned order,
                                             SignConvention sign = SignConvention::SubstitutionPlus);
  static EdgeworthExpansion averaged(const CumulantSet<double>& summand, std::size_t n, unsigned order,
                                     SignConvention sign = SignConvention::SubstitutionPlus);

  std::size_t dim() const { return k_; }
  unsigned order() const { return order_; }
  SignConvention sign() const { return sign_; }
  ScaleConvention scale() const { return scale_; }
  const std::vector<HermiteTerm>& terms() const { return terms_; }
  unsigned max_hermite_degree() const { return max_degree_; }

  // density / phi.
  double correction_factor(std::span<const double> x) const;
  double density(std::span<const double> x) const;

 private:
  std::size_t k_;
  unsigned order_;
  SignConvention sign_;
  ScaleConvention scale_;
  std::vector<HermiteTerm> terms_;
  unsigned max_degree_ = 0;
};

double expansion_density(const EdgeworthExpansion& e, std::span<const double> x);

// Fourth moments mu_alpha, |alpha| = 4, keyed by index.
template <class T>
using FourthMoments = std::map<MultiIndex, T>;

template <class T>
FourthMoments<T> fourth_moments(const MomentSet<T>& ms) {
  if (ms.max_order() < 4) throw std::invalid_argument("fourth_moments: table stops below order 4");
  FourthMoments<T> out;
  for (const auto& alpha : enumerate_degree(ms.dim(), 4)) out.emplace(alpha, ms.at(alpha));
  return out;
}

// The bracketed sum B(x) in g(x) = phi(x) (1 + scale * B(x)), with the five
// bracket groups (4, 3-1, 2-2, 2-1-1, 1-1-1-1) written out directly in the
// moments. PaperMinus gives the printed signs (-1/24, -1/6, -1/4, -1/2, -1);
// SubstitutionPlus flips all of them. Third moments are taken to be zero.
template <class T>
T closed_form_g_bracket(std::size_t k, const FourthMoments<T>& mu, std::span<const T> x, SignConvention sign);

// g(x) with scale 3/n.
double closed_form_g_density(std::size_t k, const FourthMoments<double>& mu, std::size_t n,
                             std::span<const double> x,
                             SignConvention sign = SignConvention::SubstitutionPlus);

// g(x) with an explicit scale, e.g. l_4(theta).
double closed_form_g_density_scaled(std::size_t k, const FourthMoments<double>& mu, double scale,
                                    std::span<const double> x,
                                    SignConvention sign = SignConvention::SubstitutionPlus);

// G(x) = Phi(x) - (beta4 - 3)/(8n) (x^3 - 3x) phi(x).
double bobkov_g_cdf(double beta4, std::size_t n, double x);

}  // namespace edgeworth

#include "edgeworth/expansion_closed_form.ipp"
