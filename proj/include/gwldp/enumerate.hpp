#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gwldp/kernel.hpp"
#include "gwldp/sampler.hpp"
#include "gwldp/tree.hpp"

namespace gwldp {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumeratedTree {
  TypedTree tree;
  double probability;  // mu(X(rho)) * prod_v Q{C(v)|X(v)}, exact
};

/**
 * Every typed planar tree with exactly n vertices and positive probability,
 * each exactly once with its exact probability; the probabilities sum to
 * P{|T| = n}. Configurations with more than n-1 children cannot occur in an
 * n-vertex tree, so unbounded kernels are enumerated exactly as well.
 *
 * The budget counts constructed subtree/type pairs; exceeding it throws
 * BudgetExceeded.
 */
std::vector<EnumeratedTree> enumerate_trees(const OffspringKernel& kernel, const RootLaw& mu,
                                            int n, std::int64_t budget = 10000000);

/// P{|T| = n} = sum of enumerate_trees probabilities, without materializing trees.
double exact_size_probability(const OffspringKernel& kernel, const RootLaw& mu, int n,
                              std::int64_t budget = 10000000);

}  // namespace gwldp
