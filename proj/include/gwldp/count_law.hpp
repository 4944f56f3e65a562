#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gwldp/rng.hpp"

namespace gwldp {

/**
 * Offspring-count law p on the nonnegative integers. Three families:
 *
 *   table        finite vector p(0..L)
 *   geometric(q) p(l) = q (1-q)^l
 *   poisson(l)   p(l) = e^-l l^l / l!
 *
 * The log moment generating function Lambda(lam) = log sum p(n) e^{lam n} and
 * its first two derivatives are analytic for the named families and exact
 * finite sums for tables. geometric(q) has the finiteness boundary
 * lam < -log(1-q); the other families are entire.
 */
class CountLaw {
 public:
  enum class Kind { Table, Geometric, Poisson };

  static CountLaw table(std::vector<double> p);
  static CountLaw geometric(double q);
  static CountLaw poisson(double lambda);

  Kind kind() const { return kind_; }
  std::string family_name() const;

  double pmf(int n) const;
  double mean() const;

  // Largest support point, or nullopt for unbounded laws.
  std::optional<int> support_max() const;

  // P{N > k}.
  double tail_mass_above(int k) const;

  // Smallest k with P{N > k} <= tail_mass.
  int enumeration_cutoff(double tail_mass) const;

  // Supremum of the Lambda finiteness domain (+inf when entire).
  double mgf_boundary() const;

  double log_mgf(double lam) const;     // Lambda(lam); throws at/above the boundary
  double log_mgf_d1(double lam) const;  // tilted mean
  double log_mgf_d2(double lam) const;  // tilted variance

  // p_theta(n) = p(n) e^{theta n} / sum_j p(j) e^{theta j}, within the family.
  CountLaw tilt(double theta) const;

  int sample(RngStream& rng) const;

  // 1/2 sum_n |p - q| over the full support.
  double tv_distance(const CountLaw& other) const;

  bool operator==(const CountLaw& other) const {
    return kind_ == other.kind_ && table_ == other.table_ && q_ == other.q_ &&
           lambda_ == other.lambda_;
  }

 private:
  CountLaw() = default;

  Kind kind_ = Kind::Table;
  std::vector<double> table_;  // Table
  double q_ = 0.0;             // Geometric
  double lambda_ = 0.0;        // Poisson
};

/// Result of solving the tilted-mean equation sum_n n p_theta(n) = 1.
struct CriticalTilt {
  double theta;
  CountLaw law;
};

/**
 * Finds the unique theta* with tilted mean exactly 1 (to 1e-10) by bisection
 * on the monotone map theta -> Lambda'(theta). Requires 0 < p(0) < 1 - p(1).
 * The bracket grows geometrically from [-1,1], capped at |theta| <= 700 and
 * at the MGF boundary; failure to straddle inside the finiteness domain is a
 * domain error naming the boundary.
 */
CriticalTilt tilt_to_critical(const CountLaw& p);

}  // namespace gwldp
