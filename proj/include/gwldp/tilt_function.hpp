#pragma once

#include <cmath>
#include <map>
#include <utility>

#include "gwldp/config.hpp"

namespace gwldp {

/**
 * Bounded function g on X x X*: a finite map of explicit values plus a
 * default for every other point. Exponential tilts of kernels and
 * Radon-Nikodym weights are driven by these.
 */
class TiltFunction {
 public:
  using Key = std::pair<TypeId, OffspringConfig>;

  TiltFunction() = default;
  explicit TiltFunction(double default_value) : default_(default_value) {}

  static TiltFunction zero() { return TiltFunction{}; }
  static TiltFunction constant(double v) { return TiltFunction(v); }

  void set(TypeId a, OffspringConfig c, double value) {
    values_[Key(a, std::move(c))] = value;
  }

  double operator()(TypeId a, const OffspringConfig& c) const {
    auto it = values_.find(Key(a, c));
    return it == values_.end() ? default_ : it->second;
  }

  double default_value() const { return default_; }
  const std::map<Key, double>& explicit_values() const { return values_; }

  // max |g| over the explicit map and the default.
  double bound() const {
    double b = std::abs(default_);
    for (const auto& [k, v] : values_) b = std::max(b, std::abs(v));
    return b;
  }

  // Largest value g attains for parent type a (explicit entries and default).
  double max_for_type(TypeId a) const {
    double b = default_;
    for (const auto& [k, v] : values_) {
      if (k.first == a) b = std::max(b, v);
    }
    return b;
  }

 private:
  std::map<Key, double> values_;
  double default_ = 0.0;
};

}  // namespace gwldp
