// Closed form of g, included from expansion.hpp.

namespace edgeworth {

namespace detail {

template <class T>
const T& fourth(const FourthMoments<T>& mu, std::size_t k, std::initializer_list<std::pair<std::size_t, unsigned>> at) {
  std::vector<unsigned> e(k, 0);
  for (auto [i, p] : at) e[i] += p;
  auto it = mu.find(MultiIndex(std::move(e)));
  if (it == mu.end()) throw std::invalid_argument("closed form: incomplete fourth-moment table");
  return it->second;
}

}  // namespace detail

template <class T>
T closed_form_g_bracket(std::size_t k, const FourthMoments<T>& mu, std::span<const T> x, SignConvention sign) {
  if (x.size() != k) throw std::invalid_argument("closed form: dimension mismatch");
  if (mu.size() != enumerate_degree(k, 4).size()) {
    throw std::invalid_argument("closed form: incomplete fourth-moment table");
  }
  using detail::fourth;
  T quartic(0), three_one(0), two_two(0), two_one_one(0), one4(0);

  for (std::size_t i = 0; i < k; ++i) {
    const T xi2 = x[i] * x[i];
    quartic += (fourth(mu, k, {{i, 4}}) - T(3)) * (T(3) - T(6) * xi2 + xi2 * xi2);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      three_one += fourth(mu, k, {{i, 3}, {j, 1}}) * (x[i] * x[i] * x[i] * x[j] - T(3) * x[i] * x[j]);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const T xi2 = x[i] * x[i], xj2 = x[j] * x[j];
      two_two += (fourth(mu, k, {{i, 2}, {j, 2}}) - T(1)) * (T(1) - xi2 - xj2 + xi2 * xj2);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t l = j + 1; l < k; ++l) {
        if (j == i || l == i) continue;
        two_one_one += fourth(mu, k, {{i, 2}, {j, 1}, {l, 1}}) * (x[i] * x[i] * x[j] * x[l] - x[j] * x[l]);
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      for (std::size_t c = b + 1; c < k; ++c) {
        for (std::size_t d = c + 1; d < k; ++d) {
          one4 += fourth(mu, k, {{a, 1}, {b, 1}, {c, 1}, {d, 1}}) * (x[a] * x[b] * x[c] * x[d]);
        }
      }
    }
  }

  T printed = -(quartic / T(24)) - three_one / T(6) - two_two / T(4) - two_one_one / T(2) - one4;
  return sign == SignConvention::PaperMinus ? printed : T(-printed);
}

}  // namespace edgeworth
