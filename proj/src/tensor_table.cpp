#include "edgeworth/tensor_table.hpp"

#include <charconv>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <tuple>

namespace edgeworth {

std::string to_string(ArithmeticMode mode) {
  return mode == ArithmeticMode::Exact ? "exact" : "floating";
}

std::string format_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    BigInt num(std::string(text.substr(0, slash)));
    BigInt den(std::string(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::runtime_error("cannot parse rational '" + std::string(text) + "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

IndexSpace::IndexSpace(std::size_t k, unsigned lo, unsigned hi) : k_(k), lo_(lo), hi_(hi) {
  if (k == 0) throw std::invalid_argument("IndexSpace: k must be >= 1");
  if (lo > hi) throw std::invalid_argument("IndexSpace: empty degree range");
  for (unsigned d = lo; d <= hi; ++d) {
    degree_offsets_.push_back(indices_.size());
    auto level = enumerate_degree(k, d);
    indices_.insert(indices_.end(), level.begin(), level.end());
  }
  degree_offsets_.push_back(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) lookup_.emplace(indices_[i], i);
}

std::shared_ptr<const IndexSpace> IndexSpace::get(std::size_t k, unsigned lo, unsigned hi) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, unsigned, unsigned>, std::shared_ptr<const IndexSpace>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_tuple(k, lo, hi);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto space = std::make_shared<const IndexSpace>(k, lo, hi);
  cache.emplace(key, space);
  return space;
}

std::size_t IndexSpace::position(const MultiIndex& alpha) const {
  auto it = lookup_.find(alpha);
  if (it == lookup_.end()) {
    throw std::out_of_range("multi-index " + alpha.to_string() + " outside table");
  }
  return it->second;
}

bool IndexSpace::contains(const MultiIndex& alpha) const { return lookup_.count(alpha) != 0; }

std::pair<std::size_t, std::size_t> IndexSpace::degree_range(unsigned d) const {
  if (d < lo_ || d > hi_) return {0, 0};
  return {degree_offsets_[d - lo_], degree_offsets_[d - lo_ + 1]};
}

template <class T, class Tag>
void write_table(std::ostream& os, const TensorTable<T, Tag>& table) {
  os << "# k=" << table.dim() << " m=" << table.max_order() << " mode=" << to_string(table.mode())
     << "\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    os << table.indices()[i].to_string() << ';';
    if constexpr (is_exact_v<T>) {
      os << format_rational(table.at_position(i));
    } else {
      os << format_double(table.at_position(i));
    }
    os << '\n';
  }
}

TableHeader read_table_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("#", 0) != 0) {
    throw std::runtime_error("table: missing '# k=.. m=.. mode=..' header");
  }
  TableHeader h;
  std::istringstream ss(line.substr(1));
  std::string field;
  bool have_k = false, have_m = false;
  while (ss >> field) {
    auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "k") {
      h.k = std::stoul(value);
      have_k = true;
    } else if (key == "m") {
      h.m = static_cast<unsigned>(std::stoul(value));
      have_m = true;
    } else if (key == "mode") {
      if (value == "exact") {
        h.mode = ArithmeticMode::Exact;
      } else if (value == "floating") {
        h.mode = ArithmeticMode::Floating;
      } else {
        throw std::runtime_error("table: unknown mode '" + value + "'");
      }
    }
  }
  if (!have_k || !have_m || h.k == 0 || h.m == 0) throw std::runtime_error("table: incomplete header");
  return h;
}

template <class T, class Tag>
TensorTable<T, Tag> read_table(std::istream& is) {
  TableHeader h = read_table_header(is);
  if constexpr (is_exact_v<T>) {
    if (h.mode != ArithmeticMode::Exact) {
      throw std::runtime_error("table: floating records cannot be read as exact values");
    }
  }
  TensorTable<T, Tag> table(h.k, h.m);
  std::vector<bool> seen(table.size(), false);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto semi = line.find(';');
    if (semi == std::string::npos) throw std::runtime_error("table: malformed record '" + line + "'");
    MultiIndex alpha = MultiIndex::parse(std::string_view(line).substr(0, semi));
    if (alpha.dim() != h.k) throw std::runtime_error("table: index dimension mismatch in '" + line + "'");
    std::string value = line.substr(semi + 1);
    std::size_t pos = table.space().position(alpha);
    if (h.mode == ArithmeticMode::Exact) {
      table.at_position(pos) = scalar_from_rational<T>(parse_rational(value));
    } else {
      if constexpr (!is_exact_v<T>) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
          throw std::runtime_error("table: bad value in '" + line + "'");
        }
        table.at_position(pos) = v;
      }
    }
    seen[pos] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw std::runtime_error("table: missing record for " + table.indices()[i].to_string());
  }
  return table;
}

template void write_table(std::ostream&, const TensorTable<double, MomentTag>&);
template void write_table(std::ostream&, const TensorTable<double, CumulantTag>&);
template void write_table(std::ostream&, const TensorTable<Rational, MomentTag>&);
template void write_table(std::ostream&, const TensorTable<Rational, CumulantTag>&);
template TensorTable<double, MomentTag> read_table(std::istream&);
template TensorTable<double, CumulantTag> read_table(std::istream&);
template TensorTable<Rational, MomentTag> read_table(std::istream&);
template TensorTable<Rational, CumulantTag> read_table(std::istream&);

}  // namespace edgeworth
