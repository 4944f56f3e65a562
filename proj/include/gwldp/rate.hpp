#pragma once

#include <limits>
#include <vector>

#include "gwldp/count_law.hpp"
#include "gwldp/kernel.hpp"
#include "gwldp/measures.hpp"

namespace gwldp {

/// Extended nonnegative real: the codomain of every rate function.
class RateValue {
 public:
  static RateValue finite(double v);
  static RateValue infinity() { return RateValue(std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return v_ != std::numeric_limits<double>::infinity(); }
  double value() const { return v_; }

  friend bool operator==(const RateValue&, const RateValue&) = default;

 private:
  explicit RateValue(double v) : v_(v) {}
  double v_;
};

/**
 * H(nu || ref) = sum nu log(nu/ref), natural log, 0 log 0 = 0. Returns
 * infinity when nu puts mass outside supp(ref); never throws for that.
 * Inputs are nonnegative vectors; a result below -1e-9 (possible only under
 * a reference-mass mismatch) is flagged as an error.
 */
RateValue relative_entropy(const std::vector<double>& nu, const std::vector<double>& ref);
RateValue relative_entropy(const OffspringMeasure& nu, const OffspringMeasure& ref);
RateValue relative_entropy(const PairMeasure& nu, const PairMeasure& ref);

struct RateOptions {
  double marginal_tol = 1e-9;     // max-entry gate for pair_second vs nu_first
  double consistency_tol = 1e-10;
  // When set, nu is rescaled per type so its first marginal equals the pair
  // measure's second marginal exactly before evaluating the entropy.
  bool snap_marginals = false;
};

// H(nu || nu_1 (x) Q) gated on sub-consistency and matching marginals.
RateValue rate_J(const PairMeasure& pair, const OffspringMeasure& nu, const OffspringKernel& q,
                 const RateOptions& opts = {});

// As rate_J but against a truncated kernel: strict consistency and nu
// supported on X_k* are required.
RateValue rate_Jk(const PairMeasure& pair, const OffspringMeasure& nu, const OffspringKernel& q_k,
                  const RateOptions& opts = {});

// H(nu || nu_1 (x) Q) gated on <m>nu(b) <= nu_1(b) + tol for every b.
RateValue rate_K(const OffspringMeasure& nu, const OffspringKernel& q, double tol = 1e-10);

/**
 * Cramer rate of the count law: I_p(x) = sup_lambda { lambda x - Lambda(lambda) },
 * solved by bisection on the strictly increasing tilted mean Lambda'.
 * Boundary behavior: I_p(0) = -log p(0); for bounded laws I_p at the top of
 * the support is -log p(max) and +infinity beyond it.
 */
RateValue legendre_Ip(const CountLaw& p, double x);

// x log x - (x+1) log((x+1)/2), the geometric(1/2) closed form.
RateValue ip_geometric_closed(double x);

/**
 * Rate for the empirical pair measure of a Markov chain indexed by a
 * conditioned Galton-Watson tree:
 *
 *   I(mu) = H(mu || mu_1 (x) Q) + sum_a mu_2(a) I_p(mu_1(a)/mu_2(a))
 *
 * when mu_1 << mu_2, +infinity otherwise. mu must be a probability measure.
 */
RateValue rate_I(const PairMeasure& mu, const Matrix& transition, const CountLaw& p);

// Geometric(1/2) closed form of rate_I:
// H(mu || mu_1 (x) Q) + H(mu_1 || (mu_1+mu_2)/2) + H(mu_2 || (mu_1+mu_2)/2).
RateValue rate_I_geometric(const PairMeasure& mu, const Matrix& transition);

/// Both routes of the constrained-infimum identity.
struct InfimumOracle {
  RateValue brute_force;  // numerical minimum over measures on X_k*
  RateValue closed_form;  // z H(phi/z || q_hat) + I_p(z), z = sum(phi)
  int iterations = 0;
  double constraint_error = 0.0;
};

/**
 * Left side: inf { H(nu~ || q) : nu~ on X_k*, sum_c m(b,c) nu~(c) = phi(b) }
 * with q(c) = p(n) prod_i q_hat(a_i), solved by a damped exponential-family
 * fixed point (per-type dual variables, moment matching to 1e-8, damping 0.5,
 * at most 10^4 sweeps). Infeasibility at the truncation is reported as an
 * infinite brute-force value. Right side: the closed form.
 */
InfimumOracle lemma_inf_oracle(const std::vector<double>& phi, const std::vector<double>& q_hat,
                               const CountLaw& p, int k);

struct BallMinimum {
  RateValue value;
  double grid_resolution;
};

/**
 * Approximate inf of rate_J over the ball
 * { (pi', nu') : tv(pi', pi) <= radius, tv(nu', nu) <= radius } by a segment
 * grid toward the kernel-typical measure followed by pattern descent over
 * mass transfers on the simplex. nu must be supported on X_k*; the atom
 * budget is small-instance scale and its violation is a resource error.
 */
BallMinimum minimize_rate_ball(const PairMeasure& pair_center, const OffspringMeasure& nu_center,
                               double radius, const OffspringKernel& q, int k, int grid_points);

}  // namespace gwldp
