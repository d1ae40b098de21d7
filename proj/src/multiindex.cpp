#include "edgeworth/multiindex.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace edgeworth {

MultiIndex::MultiIndex(std::vector<unsigned> exponents) : exps_(std::move(exponents)) {
  if (exps_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
  degree_ = std::accumulate(exps_.begin(), exps_.end(), 0u);
}

MultiIndex::MultiIndex(std::initializer_list<unsigned> exponents)
    : MultiIndex(std::vector<unsigned>(exponents)) {}

MultiIndex MultiIndex::zero(std::size_t k) { return MultiIndex(std::vector<unsigned>(k, 0)); }

MultiIndex MultiIndex::unit(std::size_t k, std::size_t i, unsigned power) {
  std::vector<unsigned> e(k, 0);
  e.at(i) = power;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
  std::vector<unsigned> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(exps_[i]);
  }
  return out;
}

MultiIndex MultiIndex::parse(std::string_view text) {
  std::vector<unsigned> e;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view field = text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw std::invalid_argument("MultiIndex: cannot parse '" + std::string(text) + "'");
    }
    e.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return MultiIndex(std::move(e));
}

bool canonical_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return b < a;
}

namespace {

void fill_degree(std::vector<unsigned>& cur, std::size_t pos, unsigned remaining,
                 std::vector<MultiIndex>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (unsigned v = remaining + 1; v-- > 0;) {
    cur[pos] = v;
    fill_degree(cur, pos + 1, remaining - v, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_degree(std::size_t k, unsigned d) {
  if (k == 0) throw std::invalid_argument("enumerate_degree: k must be >= 1");
  std::vector<MultiIndex> out;
  std::vector<unsigned> cur(k, 0);
  fill_degree(cur, 0, d, out);
  return out;
}

std::vector<MultiIndex> enumerate_range(std::size_t k, unsigned lo, unsigned hi) {
  std::vector<MultiIndex> out;
  for (unsigned d = lo; d <= hi; ++d) {
    auto level = enumerate_degree(k, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

}  // namespace

std::uint64_t mi_factorial(const MultiIndex& alpha) {
  std::uint64_t r = 1;
  for (unsigned a : alpha.exponents()) {
    for (unsigned j = 2; j <= a; ++j) r = checked_mul(r, j);
  }
  return r;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    // acc * (n - r + i) / i stays integral at each step
    std::uint64_t g = std::gcd(acc, i);
    std::uint64_t num = (n - r + i) / (i / g);
    acc = checked_mul(acc / g, num);
  }
  return acc;
}

double monomial(const MultiIndex& alpha, std::span<const double> t) {
  if (t.size() != alpha.dim()) throw std::invalid_argument("monomial: dimension mismatch");
  double r = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (unsigned p = 0; p < alpha[i]; ++p) r *= t[i];
  }
  return r;
}

}  // namespace edgeworth
