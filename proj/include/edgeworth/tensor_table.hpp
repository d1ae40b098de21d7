#pragma once

#include "edgeworth/multiindex.hpp"
#include "edgeworth/rational.hpp"

#include <cstddef>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgeworth {

enum class ArithmeticMode { Exact, Floating };

std::string to_string(ArithmeticMode mode);

// The canonical list of multi-indices with lo <= |alpha| <= hi in k variables,
// plus a position lookup. Shared between tables of the same shape.
class IndexSpace {
 public:
  IndexSpace(std::size_t k, unsigned lo, unsigned hi);

  static std::shared_ptr<const IndexSpace> get(std::size_t k, unsigned lo, unsigned hi);

  std::size_t dim() const { return k_; }
  unsigned min_degree() const { return lo_; }
  unsigned max_degree() const { return hi_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& operator[](std::size_t pos) const { return indices_[pos]; }

  // Throws std::out_of_range when alpha is not in the space.
  std::size_t position(const MultiIndex& alpha) const;
  bool contains(const MultiIndex& alpha) const;

  // Positions of all indices of exactly degree d, as a [begin, end) range.
  std::pair<std::size_t, std::size_t> degree_range(unsigned d) const;

 private:
  std::size_t k_;
  unsigned lo_, hi_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> degree_offsets_;
  std::map<MultiIndex, std::size_t> lookup_;
};

// Dense association alpha -> value for 1 <= |alpha| <= m, stored in canonical
// order. Tag distinguishes moments from cumulants at the type level.
template <class T, class Tag>
class TensorTable {
 public:
  using value_type = T;

  TensorTable(std::size_t k, unsigned m)
      : space_(IndexSpace::get(k, 1, m)), values_(space_->size(), T(0)) {}

  std::size_t dim() const { return space_->dim(); }
  unsigned max_order() const { return space_->max_degree(); }
  std::size_t size() const { return values_.size(); }
  const std::vector<MultiIndex>& indices() const { return space_->indices(); }
  const IndexSpace& space() const { return *space_; }

  static constexpr ArithmeticMode mode() {
    return is_exact_v<T> ? ArithmeticMode::Exact : ArithmeticMode::Floating;
  }

  T& at(const MultiIndex& alpha) { return values_.at(space_->position(alpha)); }
  const T& at(const MultiIndex& alpha) const { return values_.at(space_->position(alpha)); }
  T& at_position(std::size_t pos) { return values_[pos]; }
  const T& at_position(std::size_t pos) const { return values_[pos]; }
  const std::vector<T>& values() const { return values_; }

  // Same table restricted to orders <= m.
  TensorTable truncated(unsigned m) const {
    if (m > max_order()) throw std::invalid_argument("truncated: order exceeds table");
    TensorTable out(dim(), m);
    for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = values_[i];
    return out;
  }

  template <class U>
  TensorTable<U, Tag> cast() const {
    TensorTable<U, Tag> out(dim(), max_order());
    for (std::size_t i = 0; i < size(); ++i) {
      if constexpr (std::is_same_v<U, double>) {
        out.at_position(i) = to_double(values_[i]);
      } else {
        out.at_position(i) = U(values_[i]);
      }
    }
    return out;
  }

  bool operator==(const TensorTable& other) const {
    return dim() == other.dim() && max_order() == other.max_order() && values_ == other.values_;
  }

 private:
  std::shared_ptr<const IndexSpace> space_;
  std::vector<T> values_;
};

struct MomentTag {};
struct CumulantTag {};

template <class T>
using MomentSet = TensorTable<T, MomentTag>;
template <class T>
using CumulantSet = TensorTable<T, CumulantTag>;

// Line-record text form:
//   # k=<k> m=<m> mode=<exact|floating>
//   a1,...,ak;value
// one record per index in canonical order. Floats use 17 significant digits,
// exact values are written as p/q.
template <class T, class Tag>
void write_table(std::ostream& os, const TensorTable<T, Tag>& table);

struct TableHeader {
  std::size_t k = 0;
  unsigned m = 0;
  ArithmeticMode mode = ArithmeticMode::Floating;
};

TableHeader read_table_header(std::istream& is);

// Reads a table written by write_table. Exact records parse into either
// scalar type; floating records only into double. Throws std::runtime_error
// on malformed input or missing indices.
template <class T, class Tag>
TensorTable<T, Tag> read_table(std::istream& is);

std::string format_double(double v);

}  // namespace edgeworth
