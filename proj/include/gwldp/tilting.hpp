#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gwldp/kernel.hpp"
#include "gwldp/measures.hpp"
#include "gwldp/sampler.hpp"
#include "gwldp/tilt_function.hpp"
#include "gwldp/tree.hpp"

namespace gwldp {

/**
 * U_g(a) = log sum_c e^{g(a,c)} Q{c|a}, computed exactly for any kernel by
 * splitting the sum over the finite explicit map of g and its default-valued
 * complement.
 */
std::vector<double> u_g(const TiltFunction& g, const OffspringKernel& q);

struct TiltedModel {
  OffspringKernel kernel;  // Q~{c|a} = Q{c|a} e^{g(a,c) - U_g(a)}
  RootLaw root_law;        // mu~(a) = mu(a) e^{U_g(a)} / sum_b mu(b) e^{U_g(b)}
};

TiltedModel tilted_model(const OffspringKernel& q, const RootLaw& mu, const TiltFunction& g);

/// The two algebraic routes to log(dP~/dP); they agree up to rounding.
struct RnWeightForms {
  double product_form;    // root factor plus per-vertex g - U_g terms
  double empirical_form;  // via the empirical offspring measure
};

RnWeightForms log_rn_weight_forms(const TypedTree& tree, const TiltFunction& g,
                                  const OffspringKernel& q, const RootLaw& mu);

// Asserts the two forms agree within 1e-9 and returns the product form.
double log_rn_weight(const TypedTree& tree, const TiltFunction& g, const OffspringKernel& q,
                     const RootLaw& mu);

/// Importance-sampling estimate with its dispersion diagnostics.
struct EstimateReport {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  double effective_sample_size = 0.0;
  std::uint64_t seed = 0;
  std::int64_t hits = 0;
  bool reliable = false;  // false when no sample hit the event
};

using MeasureEvent = std::function<bool(const PairMeasure&, const OffspringMeasure&)>;

/**
 * Unbiased estimate of P{event(L~_X, M_X), |T| = n}: trees are drawn under
 * the g-tilted model with early abort beyond n vertices, and every hit is
 * weighted by dP/dP~. Sample i always uses the stream (seed, i) and partial
 * sums are combined over fixed-size blocks, so the result is bit-identical
 * for every worker count.
 */
EstimateReport estimate_prob(const OffspringKernel& q, const RootLaw& mu, int n,
                             const MeasureEvent& event, std::int64_t samples,
                             const TiltFunction& g, std::uint64_t seed, int threads = 0);

/// P{event | |T|=n} as a ratio of two joint estimates sharing samples.
struct ConditionalEstimate {
  double value = 0.0;
  double std_error = 0.0;  // delta method
  EstimateReport joint;
  EstimateReport size_only;
};

ConditionalEstimate estimate_conditional(const OffspringKernel& q, const RootLaw& mu, int n,
                                         const MeasureEvent& event, std::int64_t samples,
                                         const TiltFunction& g, std::uint64_t seed,
                                         int threads = 0);

struct DecayPoint {
  int n;
  double estimate;
  double std_error;
  double decay;  // -(1/n) log estimate; +infinity when the estimate is zero
  bool any_hits;
};

std::vector<DecayPoint> estimate_decay_rate(const OffspringKernel& q, const RootLaw& mu,
                                            const MeasureEvent& event,
                                            const std::vector<int>& n_list, std::int64_t samples,
                                            const TiltFunction& g, std::uint64_t seed,
                                            int threads = 0);

/**
 * Gibbs-conditioning tilt suggestion for steering samples toward a target
 * offspring measure: g = log(target / target_1 (x) Q) on supp(target),
 * clipped to +-clip, default 0 elsewhere.
 */
TiltFunction auto_tilt_from_measure(const OffspringMeasure& target, const OffspringKernel& q,
                                    double clip = 20.0);

}  // namespace gwldp
