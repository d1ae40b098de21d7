#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace edgeworth {

// Closed box prod_i [lo_i, hi_i]; entries may be infinite.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box whole_space(std::size_t k);
};

// Closed ball |x - center| <= radius.
struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};

// {x : <normal, x> <= offset}, normal of unit length.
struct HalfSpace {
  std::vector<double> normal;
  double offset = 0.0;
};

using ConvexSet = std::variant<Box, Ball, HalfSpace>;

std::size_t set_dim(const ConvexSet& s);

// Throws std::invalid_argument if lo > hi somewhere, radius <= 0, the normal
// is not unit within 1e-12, or any coordinate is NaN.
void validate_set(const ConvexSet& s);

bool contains(const ConvexSet& s, std::span<const double> x);

// Grammar: "box lo1,...,lok hi1,...,hik" | "ball c1,...,ck r" |
// "halfspace u1,...,uk c"; inf and -inf are accepted. The result is validated.
ConvexSet parse_convex_set(std::string_view text);
std::string format_convex_set(const ConvexSet& s);

// Comma-separated reals, "inf"/"-inf" allowed.
std::vector<double> parse_real_list(std::string_view text);
std::string format_real_list(std::span<const double> values);

}  // namespace edgeworth
