#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gwldp {

using TypeId = std::int32_t;

/**
 * Finite ordered set of type labels. The label <-> index bijection is stable:
 * index i always refers to the i-th symbol given at construction.
 */
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw std::invalid_argument("alphabet: at least one symbol required");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (!index_.emplace(symbols_[i], static_cast<TypeId>(i)).second)
        throw std::invalid_argument("alphabet: duplicate symbol '" + symbols_[i] + "'");
    }
  }

  int size() const { return static_cast<int>(symbols_.size()); }

  TypeId index_of(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end())
      throw std::domain_error("alphabet: unknown label '" + std::string(label) + "'");
    return it->second;
  }

  bool contains(std::string_view label) const {
    return index_.find(std::string(label)) != index_.end();
  }

  const std::string& symbol(TypeId id) const {
    if (id < 0 || id >= size()) throw std::domain_error("alphabet: type id out of range");
    return symbols_[static_cast<std::size_t>(id)];
  }

  const std::vector<std::string>& symbols() const { return symbols_; }

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, TypeId, std::less<>> index_;
};

}  // namespace gwldp
