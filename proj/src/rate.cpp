#include "gwldp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gwldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tiny negative entropy totals are rounding; anything larger is a genuine
// mass mismatch between the measure and its reference.
double clamp_entropy(double h) {
  if (h >= 0.0) return h;
  if (h >= -1e-9) return 0.0;
  throw std::invalid_argument("relative entropy came out negative (" + std::to_string(h) +
                              "); measure/reference masses do not match");
}

}  // namespace

RateValue RateValue::finite(double v) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw std::invalid_argument("rate value must be finite and nonnegative");
  return RateValue(v);
}

RateValue relative_entropy(const std::vector<double>& nu, const std::vector<double>& ref) {
  if (nu.size() != ref.size())
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  double h = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] == 0.0) continue;
    if (nu[i] < 0.0) throw std::invalid_argument("relative_entropy: negative entry");
    if (ref[i] <= 0.0) return RateValue::infinity();
    h += nu[i] * std::log(nu[i] / ref[i]);
  }
  return RateValue::finite(clamp_entropy(h));
}

RateValue relative_entropy(const OffspringMeasure& nu, const OffspringMeasure& ref) {
  double h = 0.0;
  for (const auto& [key, w] : nu.atoms()) {
    if (w == 0.0) continue;
    if (w < 0.0) throw std::invalid_argument("relative_entropy: negative entry");
    const double r = ref.at(key.first, key.second);
    if (r <= 0.0) return RateValue::infinity();
    h += w * std::log(w / r);
  }
  return RateValue::finite(clamp_entropy(h));
}

RateValue relative_entropy(const PairMeasure& nu, const PairMeasure& ref) {
  double h = 0.0;
  for (TypeId a = 0; a < nu.size(); ++a) {
    for (TypeId b = 0; b < nu.size(); ++b) {
      const double w = nu.at(a, b);
      if (w == 0.0) continue;
      if (w < 0.0) throw std::invalid_argument("relative_entropy: negative entry");
      const double r = ref.at(a, b);
      if (r <= 0.0) return RateValue::infinity();
      h += w * std::log(w / r);
    }
  }
  return RateValue::finite(clamp_entropy(h));
}

namespace {

// H(nu || nu_1 (x) Q) evaluated lazily on supp(nu).
RateValue entropy_against_kernel(const OffspringMeasure& nu, const OffspringKernel& q) {
  const std::vector<double> nu1 = nu.first_marginal();
  double h = 0.0;
  for (const auto& [key, w] : nu.atoms()) {
    if (w == 0.0) continue;
    const double ref = nu1[static_cast<std::size_t>(key.first)] * q.prob(key.first, key.second);
    if (ref <= 0.0) return RateValue::infinity();
    h += w * std::log(w / ref);
  }
  return RateValue::finite(clamp_entropy(h));
}

bool marginals_match(const PairMeasure& pair, const OffspringMeasure& nu, double tol) {
  const std::vector<double> p2 = pair.second_marginal();
  const std::vector<double> n1 = nu.first_marginal();
  for (std::size_t i = 0; i < p2.size(); ++i) {
    if (std::abs(p2[i] - n1[i]) > tol) return false;
  }
  return true;
}

OffspringMeasure snap_to_marginal(const OffspringMeasure& nu, const std::vector<double>& target) {
  const std::vector<double> n1 = nu.first_marginal();
  OffspringMeasure out(nu.alphabet());
  for (const auto& [key, w] : nu.atoms()) {
    const double m1 = n1[static_cast<std::size_t>(key.first)];
    if (m1 <= 0.0) continue;
    out.set(key.first, key.second, w * target[static_cast<std::size_t>(key.first)] / m1);
  }
  return out;
}

}  // namespace

RateValue rate_J(const PairMeasure& pair, const OffspringMeasure& nu, const OffspringKernel& q,
                 const RateOptions& opts) {
  if (!(pair.alphabet() == nu.alphabet()) || !(nu.alphabet() == q.alphabet()))
    throw std::invalid_argument("rate_J: alphabets differ");
  const ConsistencyClass cls = check_consistency(pair, nu, opts.consistency_tol);
  if (cls == ConsistencyClass::Neither) return RateValue::infinity();
  if (!marginals_match(pair, nu, opts.marginal_tol)) return RateValue::infinity();
  if (opts.snap_marginals)
    return entropy_against_kernel(snap_to_marginal(nu, pair.second_marginal()), q);
  return entropy_against_kernel(nu, q);
}

RateValue rate_Jk(const PairMeasure& pair, const OffspringMeasure& nu, const OffspringKernel& q_k,
                  const RateOptions& opts) {
  if (!(pair.alphabet() == nu.alphabet()) || !(nu.alphabet() == q_k.alphabet()))
    throw std::invalid_argument("rate_Jk: alphabets differ");
  const auto bound = q_k.support_bound();
  if (!bound) throw std::invalid_argument("rate_Jk: kernel must have bounded support");
  for (const auto& [key, w] : nu.atoms()) {
    if (w > 0.0 && key.second.count() > *bound) return RateValue::infinity();
  }
  if (check_consistency(pair, nu, opts.consistency_tol) != ConsistencyClass::Consistent)
    return RateValue::infinity();
  if (!marginals_match(pair, nu, opts.marginal_tol)) return RateValue::infinity();
  if (opts.snap_marginals)
    return entropy_against_kernel(snap_to_marginal(nu, pair.second_marginal()), q_k);
  return entropy_against_kernel(nu, q_k);
}

RateValue rate_K(const OffspringMeasure& nu, const OffspringKernel& q, double tol) {
  if (!(nu.alphabet() == q.alphabet())) throw std::invalid_argument("rate_K: alphabets differ");
  const std::vector<double> mv = induced_pair(nu).second_marginal();
  const std::vector<double> nu1 = nu.first_marginal();
  for (std::size_t b = 0; b < mv.size(); ++b) {
    if (mv[b] > nu1[b] + tol) return RateValue::infinity();
  }
  return entropy_against_kernel(nu, q);
}

RateValue legendre_Ip(const CountLaw& p, double x) {
  if (x < 0.0) throw std::domain_error("legendre_Ip: x must be nonnegative");
  const double p0 = p.pmf(0);
  if (x == 0.0) return p0 > 0.0 ? RateValue::finite(-std::log(p0)) : RateValue::infinity();

  if (const auto max_n = p.support_max()) {
    const double x_max = static_cast<double>(*max_n);
    if (x > x_max) return RateValue::infinity();
    if (x == x_max) {
      const double top = p.pmf(*max_n);
      return top > 0.0 ? RateValue::finite(-std::log(top)) : RateValue::infinity();
    }
  }

  // Bracket lambda* with Lambda'(lo) < x < Lambda'(hi); grow geometrically,
  // approach a finite MGF boundary by halving the remaining distance.
  const double boundary = p.mgf_boundary();
  double lo = -1.0, hi;
  if (std::isfinite(boundary)) {
    hi = boundary > 0.0 ? 0.5 * boundary : boundary - 0.5;  // strictly inside
  } else {
    hi = 1.0;
  }
  while (p.log_mgf_d1(lo) > x && lo > -700.0) lo *= 2.0;
  int growth = 0;
  while (p.log_mgf_d1(hi) < x) {
    hi = std::isfinite(boundary) ? 0.5 * (hi + boundary) : hi * 2.0;
    if (++growth > 2000 || hi > 700.0) break;
  }

  double lambda = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    lambda = 0.5 * (lo + hi);
    const double d = p.log_mgf_d1(lambda);
    if (std::abs(d - x) <= 1e-13) break;
    (d < x ? lo : hi) = lambda;
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(lambda))) break;
  }
  const double value = lambda * x - p.log_mgf(lambda);
  return RateValue::finite(std::max(0.0, value));
}

RateValue ip_geometric_closed(double x) {
  if (x < 0.0) throw std::domain_error("ip_geometric_closed: x must be nonnegative");
  const double xlogx = x == 0.0 ? 0.0 : x * std::log(x);
  const double v = xlogx - (x + 1.0) * std::log(0.5 * (x + 1.0));
  return RateValue::finite(std::max(0.0, v));
}

namespace {

void validate_probability_pair(const PairMeasure& mu) {
  if (std::abs(mu.mass() - 1.0) > 1e-9)
    throw std::invalid_argument("rate_I: mu must be a probability measure (mass " +
                                std::to_string(mu.mass()) + ")");
  for (TypeId a = 0; a < mu.size(); ++a)
    for (TypeId b = 0; b < mu.size(); ++b)
      if (mu.at(a, b) < 0.0) throw std::invalid_argument("rate_I: negative entry in mu");
}

// H(mu || mu_1 (x) Q) for a pair measure over a Markov transition matrix.
RateValue pair_chain_entropy(const PairMeasure& mu, const Matrix& transition,
                             const std::vector<double>& mu1) {
  double h = 0.0;
  for (TypeId a = 0; a < mu.size(); ++a) {
    for (TypeId b = 0; b < mu.size(); ++b) {
      const double w = mu.at(a, b);
      if (w == 0.0) continue;
      const double ref = mu1[static_cast<std::size_t>(a)] * transition.at(a, b);
      if (ref <= 0.0) return RateValue::infinity();
      h += w * std::log(w / ref);
    }
  }
  return RateValue::finite(clamp_entropy(h));
}

}  // namespace

RateValue rate_I(const PairMeasure& mu, const Matrix& transition, const CountLaw& p) {
  validate_probability_pair(mu);
  if (transition.rows != mu.size() || transition.cols != mu.size())
    throw std::invalid_argument("rate_I: transition matrix size mismatch");
  const std::vector<double> mu1 = mu.first_marginal();
  const std::vector<double> mu2 = mu.second_marginal();
  for (TypeId a = 0; a < mu.size(); ++a) {
    if (mu2[static_cast<std::size_t>(a)] == 0.0 && mu1[static_cast<std::size_t>(a)] > 0.0)
      return RateValue::infinity();  // mu_1 << mu_2 fails
  }
  const RateValue h = pair_chain_entropy(mu, transition, mu1);
  if (!h.is_finite()) return h;
  double total = h.value();
  for (TypeId a = 0; a < mu.size(); ++a) {
    const double m2 = mu2[static_cast<std::size_t>(a)];
    if (m2 == 0.0) continue;  // forced mu_1(a) = 0; the term vanishes
    const RateValue term = legendre_Ip(p, mu1[static_cast<std::size_t>(a)] / m2);
    if (!term.is_finite()) return RateValue::infinity();
    total += m2 * term.value();
  }
  return RateValue::finite(total);
}

RateValue rate_I_geometric(const PairMeasure& mu, const Matrix& transition) {
  validate_probability_pair(mu);
  if (transition.rows != mu.size() || transition.cols != mu.size())
    throw std::invalid_argument("rate_I_geometric: transition matrix size mismatch");
  const std::vector<double> mu1 = mu.first_marginal();
  const std::vector<double> mu2 = mu.second_marginal();
  for (TypeId a = 0; a < mu.size(); ++a) {
    if (mu2[static_cast<std::size_t>(a)] == 0.0 && mu1[static_cast<std::size_t>(a)] > 0.0)
      return RateValue::infinity();
  }
  const RateValue h = pair_chain_entropy(mu, transition, mu1);
  if (!h.is_finite()) return h;
  std::vector<double> mid(mu1.size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (mu1[i] + mu2[i]);
  const RateValue h1 = relative_entropy(mu1, mid);
  const RateValue h2 = relative_entropy(mu2, mid);
  if (!h1.is_finite() || !h2.is_finite()) return RateValue::infinity();
  return RateValue::finite(h.value() + h1.value() + h2.value());
}

// ---------------------------------------------------------------------------
// Constrained-infimum oracle
// ---------------------------------------------------------------------------

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

struct MultiplicityClass {
  std::vector<int> m;
  int n;
  double log_q;  // aggregated weight of all configurations in the class
};

void enumerate_classes(int s, int n, const CountLaw& p, const std::vector<double>& q_hat,
                       std::vector<int>& m, int index, int remaining,
                       std::vector<MultiplicityClass>& out) {
  if (index == s - 1) {
    m[static_cast<std::size_t>(index)] = remaining;
    double log_q = std::log(p.pmf(n)) + log_factorial(n);
    bool possible = true;
    for (int b = 0; b < s; ++b) {
      const int mb = m[static_cast<std::size_t>(b)];
      if (mb == 0) continue;
      if (q_hat[static_cast<std::size_t>(b)] <= 0.0) {
        possible = false;
        break;
      }
      log_q += mb * std::log(q_hat[static_cast<std::size_t>(b)]) - log_factorial(mb);
    }
    if (possible && p.pmf(n) > 0.0) out.push_back({m, n, log_q});
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    m[static_cast<std::size_t>(index)] = v;
    enumerate_classes(s, n, p, q_hat, m, index + 1, remaining - v, out);
  }
}

}  // namespace

InfimumOracle lemma_inf_oracle(const std::vector<double>& phi, const std::vector<double>& q_hat,
                               const CountLaw& p, int k) {
  const int s = static_cast<int>(phi.size());
  if (static_cast<int>(q_hat.size()) != s)
    throw std::invalid_argument("lemma_inf_oracle: phi and q_hat sizes differ");
  double q_mass = 0.0;
  for (double v : q_hat) {
    if (v < 0.0) throw std::invalid_argument("lemma_inf_oracle: negative q_hat entry");
    q_mass += v;
  }
  if (std::abs(q_mass - 1.0) > 1e-9)
    throw std::invalid_argument("lemma_inf_oracle: q_hat must be a probability vector");
  for (double v : phi)
    if (v < 0.0) throw std::invalid_argument("lemma_inf_oracle: negative phi entry");

  InfimumOracle out{RateValue::infinity(), RateValue::infinity(), 0, 0.0};

  // Closed form.
  double z = 0.0;
  for (double v : phi) z += v;
  if (z == 0.0) {
    const double p0 = p.pmf(0);
    out.closed_form = p0 > 0.0 ? RateValue::finite(-std::log(p0)) : RateValue::infinity();
  } else {
    std::vector<double> phi_over_z(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi_over_z[i] = phi[i] / z;
    const RateValue h = relative_entropy(phi_over_z, q_hat);
    const RateValue ip = legendre_Ip(p, z);
    if (h.is_finite() && ip.is_finite())
      out.closed_form = RateValue::finite(z * h.value() + ip.value());
  }

  // Brute force over multiplicity classes of X_k*. Classes are exact: the
  // objective and constraints depend on a configuration only through its
  // multiplicity vector, so the optimum is constant on each class.
  if (z > static_cast<double>(k)) return out;  // mean constraint infeasible at this truncation

  std::vector<MultiplicityClass> classes;
  for (int n = 0; n <= k; ++n) {
    std::vector<int> m(static_cast<std::size_t>(s), 0);
    enumerate_classes(s, n, p, q_hat, m, 0, n, classes);
  }

  // Types with phi(b) = 0 must receive no mass: drop classes touching them.
  std::vector<MultiplicityClass> live;
  for (const auto& cls : classes) {
    bool ok = true;
    for (int b = 0; b < s; ++b)
      if (phi[static_cast<std::size_t>(b)] == 0.0 && cls.m[static_cast<std::size_t>(b)] > 0) ok = false;
    if (ok) live.push_back(cls);
  }
  for (int b = 0; b < s; ++b) {
    if (phi[static_cast<std::size_t>(b)] == 0.0) continue;
    bool reachable = false;
    for (const auto& cls : live) reachable = reachable || cls.m[static_cast<std::size_t>(b)] > 0;
    if (!reachable) return out;  // constraint cannot be met on X_k*
  }
  if (live.empty()) return out;

  std::vector<double> log_w(static_cast<std::size_t>(s), 0.0);
  std::vector<double> weights(live.size());
  std::vector<double> moments(static_cast<std::size_t>(s), 0.0);
  double worst = kInf;
  int it = 0;
  for (it = 1; it <= 10000; ++it) {
    double log_max = -kInf;
    for (std::size_t i = 0; i < live.size(); ++i) {
      double lw = live[i].log_q;
      for (int b = 0; b < s; ++b)
        lw += live[i].m[static_cast<std::size_t>(b)] * log_w[static_cast<std::size_t>(b)];
      weights[i] = lw;
      log_max = std::max(log_max, lw);
    }
    double zsum = 0.0;
    for (std::size_t i = 0; i < live.size(); ++i) {
      weights[i] = std::exp(weights[i] - log_max);
      zsum += weights[i];
    }
    std::fill(moments.begin(), moments.end(), 0.0);
    for (std::size_t i = 0; i < live.size(); ++i) {
      const double nu_i = weights[i] / zsum;
      for (int b = 0; b < s; ++b)
        moments[static_cast<std::size_t>(b)] += live[i].m[static_cast<std::size_t>(b)] * nu_i;
    }
    worst = 0.0;
    for (int b = 0; b < s; ++b) {
      if (phi[static_cast<std::size_t>(b)] == 0.0) continue;
      worst = std::max(worst, std::abs(moments[static_cast<std::size_t>(b)] -
                                       phi[static_cast<std::size_t>(b)]));
    }
    if (worst <= 1e-8) break;
    for (int b = 0; b < s; ++b) {
      const double target = phi[static_cast<std::size_t>(b)];
      if (target == 0.0) continue;
      const double current = moments[static_cast<std::size_t>(b)];
      if (current <= 0.0) return out;  // dual blow-up: infeasible
      log_w[static_cast<std::size_t>(b)] += 0.5 * std::log(target / current);
      if (!std::isfinite(log_w[static_cast<std::size_t>(b)])) return out;
    }
  }
  out.iterations = std::min(it, 10000);
  out.constraint_error = worst;
  if (worst > 1e-8) return out;  // treated as infeasible at this truncation

  // H(nu~ || q): within a class the density ratio is constant,
  // nu~(c)/q(c) = exp(sum_b m_b log w_b - log Z).
  double log_max = -kInf;
  for (std::size_t i = 0; i < live.size(); ++i) {
    double lw = live[i].log_q;
    for (int b = 0; b < s; ++b)
      lw += live[i].m[static_cast<std::size_t>(b)] * log_w[static_cast<std::size_t>(b)];
    weights[i] = lw;
    log_max = std::max(log_max, lw);
  }
  double zsum = 0.0;
  for (std::size_t i = 0; i < live.size(); ++i) zsum += std::exp(weights[i] - log_max);
  const double log_z = log_max + std::log(zsum);
  double h = 0.0;
  for (std::size_t i = 0; i < live.size(); ++i) {
    const double nu_i = std::exp(weights[i] - log_z);
    if (nu_i == 0.0) continue;
    double log_ratio = -log_z;
    for (int b = 0; b < s; ++b)
      log_ratio += live[i].m[static_cast<std::size_t>(b)] * log_w[static_cast<std::size_t>(b)];
    h += nu_i * log_ratio;
  }
  out.brute_force = RateValue::finite(std::max(0.0, h));
  return out;
}

// ---------------------------------------------------------------------------
// Ball minimization
// ---------------------------------------------------------------------------

namespace {

// Best sub-consistent pair measure inside the pi-ball for a candidate nu:
// column sums must equal nu_1 and every entry must dominate <m>nu. Returns
// the achieved tv distance to the center, or infinity when no column can be
// balanced (shift-invariance defect negative).
double best_pair_distance(const OffspringMeasure& nu, const PairMeasure& center,
                          PairMeasure* out) {
  const int s = center.size();
  const PairMeasure lower = induced_pair(nu);
  const std::vector<double> nu1 = nu.first_marginal();
  PairMeasure chosen(center.alphabet());
  for (TypeId b = 0; b < s; ++b) {
    double col = 0.0;
    for (TypeId a = 0; a < s; ++a) col += lower.at(a, b);
    double slack = nu1[static_cast<std::size_t>(b)] - col;
    if (slack < -1e-12) return kInf;
    slack = std::max(0.0, slack);
    // Raise entries toward the center first (free), then dump the remainder
    // on the last row (each unit there costs one unit of distance).
    std::vector<double> x(static_cast<std::size_t>(s));
    for (TypeId a = 0; a < s; ++a) x[static_cast<std::size_t>(a)] = lower.at(a, b);
    for (TypeId a = 0; a < s && slack > 0.0; ++a) {
      const double gap = center.at(a, b) - x[static_cast<std::size_t>(a)];
      if (gap > 0.0) {
        const double add = std::min(gap, slack);
        x[static_cast<std::size_t>(a)] += add;
        slack -= add;
      }
    }
    if (slack > 0.0) x[static_cast<std::size_t>(s - 1)] += slack;
    for (TypeId a = 0; a < s; ++a) chosen.set(a, b, x[static_cast<std::size_t>(a)]);
  }
  const double d = tv_distance(chosen, center);
  if (out) *out = chosen;
  return d;
}

struct Candidate {
  OffspringMeasure nu;
  double rate;
};

}  // namespace

BallMinimum minimize_rate_ball(const PairMeasure& pair_center, const OffspringMeasure& nu_center,
                               double radius, const OffspringKernel& q, int k, int grid_points) {
  if (radius < 0.0) throw std::invalid_argument("minimize_rate_ball: radius must be nonnegative");
  if (grid_points < 2) grid_points = 2;
  const Alphabet& alphabet = q.alphabet();

  // Atom set: the center support plus the kernel-typical support on X_k*.
  std::vector<OffspringMeasure::Key> atom_keys;
  {
    OffspringMeasure atoms(alphabet);
    for (const auto& [key, w] : nu_center.atoms()) atoms.set(key.first, key.second, 1.0);
    for (TypeId a = 0; a < alphabet.size(); ++a)
      q.for_each_config(a, k, [&](const OffspringConfig& c, double p) {
        if (p > 0.0) atoms.set(a, c, 1.0);
      });
    for (const auto& [key, w] : atoms.atoms()) atom_keys.push_back(key);
  }
  if (atom_keys.size() > 5000)
    throw std::runtime_error("minimize_rate_ball: atom budget exceeded (" +
                             std::to_string(atom_keys.size()) + " atoms)");

  // Kernel-typical anchor: v(a) Q{c|a} with v the PF right eigenvector.
  const IrreducibilityReport report = classify(mean_matrix(q));
  std::vector<double> v(static_cast<std::size_t>(alphabet.size()),
                        1.0 / static_cast<double>(alphabet.size()));
  if (report.weakly_irreducible) v = report.right_eigenvector;
  OffspringMeasure anchor(alphabet);
  {
    double mass = 0.0;
    for (TypeId a = 0; a < alphabet.size(); ++a)
      q.for_each_config(a, k, [&](const OffspringConfig& c, double p) {
        const double w = v[static_cast<std::size_t>(a)] * p;
        if (w > 0.0) {
          anchor.add(a, c, w);
          mass += w;
        }
      });
    if (mass > 0.0) {
      OffspringMeasure scaled(alphabet);
      for (const auto& [key, w] : anchor.atoms()) scaled.set(key.first, key.second, w / mass);
      anchor = scaled;
    }
  }

  const auto evaluate = [&](const OffspringMeasure& nu) -> double {
    if (tv_distance(nu, nu_center) > radius + 1e-12) return kInf;
    PairMeasure best(alphabet);
    const double d = best_pair_distance(nu, pair_center, &best);
    if (d > radius + 1e-12) return kInf;
    const RateValue r = rate_J(best, nu, q, RateOptions{1e-9, 1e-9, false});
    return r.is_finite() ? r.value() : kInf;
  };

  Candidate best{nu_center, evaluate(nu_center)};

  // Segment grid toward the anchor; tv is linear in t along the segment.
  const double span = tv_distance(anchor, nu_center);
  const double t_max = span > 0.0 ? std::min(1.0, radius / span) : 0.0;
  const double resolution = t_max / (grid_points - 1);
  for (int g = 1; g < grid_points; ++g) {
    const double t = resolution * g;
    OffspringMeasure nu(alphabet);
    for (const auto& key : atom_keys) {
      const double w =
          (1.0 - t) * nu_center.at(key.first, key.second) + t * anchor.at(key.first, key.second);
      if (w > 0.0) nu.set(key.first, key.second, w);
    }
    const double r = evaluate(nu);
    if (r < best.rate) best = {nu, r};
  }

  // Pattern descent: pairwise mass transfers with shrinking step.
  double step = std::max(radius / 4.0, 1e-4);
  for (int round = 0; round < 40 && step > 1e-6; ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < atom_keys.size(); ++i) {
      for (std::size_t j = 0; j < atom_keys.size(); ++j) {
        if (i == j) continue;
        const double have = best.nu.at(atom_keys[i].first, atom_keys[i].second);
        if (have < step) continue;
        OffspringMeasure nu = best.nu;
        nu.set(atom_keys[i].first, atom_keys[i].second, have - step);
        nu.add(atom_keys[j].first, atom_keys[j].second, step);
        const double r = evaluate(nu);
        if (r < best.rate - 1e-14) {
          best = {nu, r};
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  if (!std::isfinite(best.rate)) return {RateValue::infinity(), resolution};
  return {RateValue::finite(best.rate), resolution};
}

}  // namespace gwldp
