#pragma once

#include <algorithm>
#include <compare>
#include <span>
#include <vector>

#include "gwldp/alphabet.hpp"

namespace gwldp {

/**
 * An offspring configuration c = (n, a_1..a_n): the count and the ordered
 * types of one vertex's children. The default-constructed value is the unique
 * empty configuration (0, none).
 *
 * Configurations order by (count, children lexicographically), which is the
 * canonical row order used by measure serialization.
 */
class OffspringConfig {
 public:
  OffspringConfig() = default;
  explicit OffspringConfig(std::vector<TypeId> children) : children_(std::move(children)) {}

  static OffspringConfig uniform(TypeId type, int count) {
    return OffspringConfig(std::vector<TypeId>(static_cast<std::size_t>(count), type));
  }

  int count() const { return static_cast<int>(children_.size()); }
  bool is_empty() const { return children_.empty(); }
  std::span<const TypeId> children() const { return children_; }
  TypeId child(int i) const { return children_[static_cast<std::size_t>(i)]; }

  // m(a, c): number of children of type a.
  int multiplicity(TypeId a) const {
    return static_cast<int>(std::count(children_.begin(), children_.end(), a));
  }

  std::vector<int> multiplicity_vector(int alphabet_size) const {
    std::vector<int> m(static_cast<std::size_t>(alphabet_size), 0);
    for (TypeId a : children_) ++m[static_cast<std::size_t>(a)];
    return m;
  }

  friend std::strong_ordering operator<=>(const OffspringConfig& x, const OffspringConfig& y) {
    if (auto c = x.children_.size() <=> y.children_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(x.children_.begin(), x.children_.end(),
                                                  y.children_.begin(), y.children_.end());
  }
  friend bool operator==(const OffspringConfig& x, const OffspringConfig& y) = default;

 private:
  std::vector<TypeId> children_;
};

// m(a, c) with label-level validation.
inline int multiplicity(const Alphabet& alphabet, std::string_view label,
                        const OffspringConfig& c) {
  return c.multiplicity(alphabet.index_of(label));
}

}  // namespace gwldp
