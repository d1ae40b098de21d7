#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgeworth {

// Exponent vector alpha in N^k. Indexes moments, cumulants, monomials and
// derivatives. Immutable once built.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> exponents);
  MultiIndex(std::initializer_list<unsigned> exponents);

  static MultiIndex zero(std::size_t k);
  // power * e_i
  static MultiIndex unit(std::size_t k, std::size_t i, unsigned power = 1);

  std::size_t dim() const { return exps_.size(); }
  unsigned degree() const { return degree_; }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  std::span<const unsigned> exponents() const { return exps_; }

  MultiIndex operator+(const MultiIndex& other) const;

  // Plain lexicographic order on the exponent vector; used for associative
  // containers. The canonical file order is canonical_less().
  auto operator<=>(const MultiIndex& other) const { return exps_ <=> other.exps_; }
  bool operator==(const MultiIndex& other) const { return exps_ == other.exps_; }

  // "a1,a2,...,ak"
  std::string to_string() const;
  static MultiIndex parse(std::string_view text);

 private:
  std::vector<unsigned> exps_;
  unsigned degree_ = 0;
};

// Canonical order: ascending degree, lexicographic descending within a degree.
bool canonical_less(const MultiIndex& a, const MultiIndex& b);

// All alpha with |alpha| = d in lexicographic-descending order.
std::vector<MultiIndex> enumerate_degree(std::size_t k, unsigned d);

// All alpha with lo <= |alpha| <= hi in canonical order.
std::vector<MultiIndex> enumerate_range(std::size_t k, unsigned lo, unsigned hi);

// Exact prod_i alpha_i!. Throws std::overflow_error instead of wrapping.
std::uint64_t mi_factorial(const MultiIndex& alpha);

// Exact binomial coefficient; throws std::overflow_error on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

// prod_i t_i^alpha_i. Throws std::invalid_argument on dimension mismatch.
double monomial(const MultiIndex& alpha, std::span<const double> t);

template <class T>
T monomial_exact(const MultiIndex& alpha, std::span<const T> t);

}  // namespace edgeworth

#include <stdexcept>

namespace edgeworth {

template <class T>
T monomial_exact(const MultiIndex& alpha, std::span<const T> t) {
  if (t.size() != alpha.dim()) {
    throw std::invalid_argument("monomial: dimension mismatch");
  }
  T result(1);
  for (std::size_t i = 0; i < alpha.dim(); ++i) {
    for (unsigned p = 0; p < alpha[i]; ++p) result *= t[i];
  }
  return result;
}

}  // namespace edgeworth
