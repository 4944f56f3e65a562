#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gwldp/kernel.hpp"
#include "gwldp/rng.hpp"
#include "gwldp/tree.hpp"

namespace gwldp {

using RootLaw = std::vector<double>;  // probability vector over the alphabet

void validate_root_law(const Alphabet& alphabet, const RootLaw& mu, double tol = 1e-9);

/// A conditioned sample together with the rejection count that produced it.
struct SampleReport {
  TypedTree tree;
  std::int64_t attempts;  // >= 1
  std::uint64_t rng_seed;
};

/**
 * One multitype Galton-Watson tree: root type from mu, offspring of each
 * vertex drawn independently from Q{.|type}, generated depth first. Returns
 * nullopt (Overflow) as soon as the tree would exceed max_vertices; for
 * supercritical kernels that is an expected outcome, not an error.
 */
std::optional<TypedTree> sample_tree(const OffspringKernel& kernel, const RootLaw& mu,
                                     RngStream& rng, int max_vertices);

/**
 * Tree conditioned on |T| = n by rejection with early abort at |T| > n.
 * Returns nullopt (Exhausted) after retry_budget rejections; callers are
 * responsible for P{|T| = n} > 0.
 */
std::optional<SampleReport> sample_conditioned(const OffspringKernel& kernel, const RootLaw& mu,
                                               int n, RngStream& rng,
                                               std::int64_t retry_budget = 10000000);

/**
 * Two-step construction: a plain shape from the count law conditioned on n
 * vertices, then types assigned down the edges by the transition matrix.
 * Distributed exactly as sample_conditioned over factored_kernel(p, t).
 */
std::optional<SampleReport> sample_markov_indexed(const CountLaw& counts, const Matrix& transition,
                                                  const RootLaw& mu, int n, RngStream& rng,
                                                  std::int64_t retry_budget = 10000000);

/**
 * Batch of conditioned samples. Sample i always uses the stream (seed, i), so
 * the result is bit-identical for every worker count; threads <= 0 picks the
 * GWLDP_THREADS / hardware default.
 */
std::vector<std::optional<SampleReport>> sample_conditioned_batch(const OffspringKernel& kernel,
                                                                  const RootLaw& mu, int n,
                                                                  int count, std::uint64_t seed,
                                                                  std::int64_t retry_budget = 10000000,
                                                                  int threads = 0);

// Worker count used by batch operations: GWLDP_THREADS when set, else the
// hardware concurrency.
int worker_count(int requested = 0);

// Runs fn(i) for i in [0, total) across workers; determinism comes from the
// per-index work, never from the schedule.
void parallel_for_index(int total, int threads, const std::function<void(int)>& fn);

}  // namespace gwldp
