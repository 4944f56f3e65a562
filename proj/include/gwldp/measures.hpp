#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gwldp/alphabet.hpp"
#include "gwldp/config.hpp"
#include "gwldp/tree.hpp"

namespace gwldp {

/**
 * Sparse nonnegative measure on X x X*, keyed by (type, configuration) in
 * canonical order so that serialization and iteration are deterministic.
 * Empirical offspring measures are probability measures with finite first
 * moment; intermediate constructions may carry other masses.
 */
class OffspringMeasure {
 public:
  using Key = std::pair<TypeId, OffspringConfig>;

  explicit OffspringMeasure(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const Alphabet& alphabet() const { return alphabet_; }

  double at(TypeId a, const OffspringConfig& c) const {
    auto it = atoms_.find(Key(a, c));
    return it == atoms_.end() ? 0.0 : it->second;
  }

  void add(TypeId a, OffspringConfig c, double w);
  void set(TypeId a, OffspringConfig c, double w);

  const std::map<Key, double>& atoms() const { return atoms_; }

  double mass() const;
  double first_moment() const;  // integral of n(c)

  std::vector<double> first_marginal() const;  // nu_1

  // CSV rows "type,count,children,weight" with |-joined child labels.
  std::string to_csv() const;
  static OffspringMeasure from_csv(const Alphabet& alphabet, std::string_view text);

 private:
  Alphabet alphabet_;
  std::map<Key, double> atoms_;
};

/// Dense finite measure on X x X.
class PairMeasure {
 public:
  explicit PairMeasure(Alphabet alphabet)
      : alphabet_(std::move(alphabet)),
        w_(static_cast<std::size_t>(alphabet_.size()) * static_cast<std::size_t>(alphabet_.size()),
           0.0) {}

  const Alphabet& alphabet() const { return alphabet_; }
  int size() const { return alphabet_.size(); }

  double at(TypeId a, TypeId b) const {
    return w_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size()) +
              static_cast<std::size_t>(b)];
  }
  void set(TypeId a, TypeId b, double w) {
    w_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size()) +
       static_cast<std::size_t>(b)] = w;
  }
  void add(TypeId a, TypeId b, double w) {
    w_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size()) +
       static_cast<std::size_t>(b)] += w;
  }

  double mass() const;
  std::vector<double> first_marginal() const;   // row sums
  std::vector<double> second_marginal() const;  // column sums

  // CSV rows "from,to,weight", all entries in alphabet order.
  std::string to_csv() const;
  static PairMeasure from_csv(const Alphabet& alphabet, std::string_view text);

 private:
  Alphabet alphabet_;
  std::vector<double> w_;
};

// M_X(a,c) = #{v : X(v)=a, C(v)=c} / |T|.
OffspringMeasure offspring_measure(const TypedTree& tree, const Alphabet& alphabet);

// L~_X(a,b) = #{edges a -> b} / |T|; total mass (|T|-1)/|T|.
PairMeasure pair_measure_tilde(const TypedTree& tree, const Alphabet& alphabet);

// L_X = (n/(n-1)) L~_X, a probability measure; |T| >= 2 required.
PairMeasure pair_measure(const TypedTree& tree, const Alphabet& alphabet);

enum class ConsistencyClass { Consistent, SubConsistent, Neither };

// Classifies D(a,b) = pi(a,b) - sum_c m(b,c) nu(a,c): Consistent when
// max|D| <= tol, SubConsistent when min D >= -tol, otherwise Neither.
ConsistencyClass check_consistency(const PairMeasure& pair, const OffspringMeasure& nu,
                                   double tol = 1e-10);

// The pair measure induced by consistency: (a,b) -> sum_c m(b,c) nu(a,c).
PairMeasure induced_pair(const OffspringMeasure& nu);

std::vector<double> nu_first(const OffspringMeasure& nu);
std::vector<double> pair_second(const PairMeasure& pair);

double tv_distance(const OffspringMeasure& x, const OffspringMeasure& y);
double tv_distance(const PairMeasure& x, const PairMeasure& y);

// nu_k = nu restricted to configurations with at most k children, renormalized.
OffspringMeasure truncate_measure(const OffspringMeasure& nu, int k);

/**
 * Consistency repair: from a sub-consistent pair builds the nearby consistent
 * pair in which each per-entry deficit pi(a,b) - <m>nu(a,b) is planted as a
 * fresh atom on the configuration with exactly n children, all of type b.
 * The output is consistent by construction, tv(nu_hat, nu) = deficit/n, and
 * negativity at the given n (mass scale going below zero) is a domain error
 * advising a larger n.
 */
std::pair<PairMeasure, OffspringMeasure> repair_consistency(const PairMeasure& pair,
                                                            const OffspringMeasure& nu,
                                                            long n);

}  // namespace gwldp
