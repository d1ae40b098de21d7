#include "edgeworth/convex_set.hpp"

#include "edgeworth/tensor_table.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace edgeworth {

Box Box::whole_space(std::size_t k) {
  const double inf = std::numeric_limits<double>::infinity();
  return Box{std::vector<double>(k, -inf), std::vector<double>(k, inf)};
}

std::size_t set_dim(const ConvexSet& s) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Box>) return v.lo.size();
        if constexpr (std::is_same_v<V, Ball>) return v.center.size();
        if constexpr (std::is_same_v<V, HalfSpace>) return v.normal.size();
      },
      s);
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void validate_set(const ConvexSet& s) {
  if (const auto* b = std::get_if<Box>(&s)) {
    require(!b->lo.empty() && b->lo.size() == b->hi.size(), "box: lo/hi dimension mismatch");
    for (std::size_t i = 0; i < b->lo.size(); ++i) {
      require(!std::isnan(b->lo[i]) && !std::isnan(b->hi[i]), "box: NaN bound");
      require(b->lo[i] <= b->hi[i], "box: lo > hi");
    }
  } else if (const auto* ball = std::get_if<Ball>(&s)) {
    require(!ball->center.empty(), "ball: empty center");
    for (double c : ball->center) require(std::isfinite(c), "ball: center must be finite");
    require(ball->radius > 0.0 && std::isfinite(ball->radius), "ball: radius must be > 0");
  } else {
    const auto& h = std::get<HalfSpace>(s);
    require(!h.normal.empty(), "halfspace: empty normal");
    double sq = 0.0;
    for (double u : h.normal) sq += u * u;
    require(std::abs(std::sqrt(sq) - 1.0) <= 1e-12, "halfspace: normal must have unit length");
    require(!std::isnan(h.offset), "halfspace: NaN offset");
  }
}

bool contains(const ConvexSet& s, std::span<const double> x) {
  if (const auto* b = std::get_if<Box>(&s)) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < b->lo[i] || x[i] > b->hi[i]) return false;
    }
    return true;
  }
  if (const auto* ball = std::get_if<Ball>(&s)) {
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - ball->center[i];
      sq += d * d;
    }
    return sq <= ball->radius * ball->radius;
  }
  const auto& h = std::get<HalfSpace>(s);
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += h.normal[i] * x[i];
  return dot <= h.offset;
}

namespace {

double parse_real(std::string_view field) {
  if (field == "inf" || field == "+inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* begin = field.data();
  if (!field.empty() && field[0] == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("cannot parse real '" + std::string(field) + "'");
  }
  return v;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

}  // namespace

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    auto comma = text.find(',', pos);
    auto field = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
    out.push_back(parse_real(field));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_real_list(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    out += format_real(values[i]);
  }
  return out;
}

ConvexSet parse_convex_set(std::string_view text) {
  std::istringstream ss{std::string(text)};
  std::string kind, a, b, extra;
  if (!(ss >> kind >> a >> b) || (ss >> extra)) {
    throw std::invalid_argument("set: expected '<box|ball|halfspace> <list> <value(s)>', got '" +
                                std::string(text) + "'");
  }
  ConvexSet s;
  if (kind == "box") {
    s = Box{parse_real_list(a), parse_real_list(b)};
  } else if (kind == "ball") {
    s = Ball{parse_real_list(a), parse_real(b)};
  } else if (kind == "halfspace") {
    s = HalfSpace{parse_real_list(a), parse_real(b)};
  } else {
    throw std::invalid_argument("set: unknown kind '" + kind + "'");
  }
  validate_set(s);
  return s;
}

std::string format_convex_set(const ConvexSet& s) {
  if (const auto* b = std::get_if<Box>(&s)) return "box " + format_real_list(b->lo) + " " + format_real_list(b->hi);
  if (const auto* ball = std::get_if<Ball>(&s)) {
    return "ball " + format_real_list(ball->center) + " " + format_real(ball->radius);
  }
  const auto& h = std::get<HalfSpace>(s);
  return "halfspace " + format_real_list(h.normal) + " " + format_real(h.offset);
}

}  // namespace edgeworth
