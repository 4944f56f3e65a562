#include "gwldp/tilting.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace gwldp {

std::vector<double> u_g(const TiltFunction& g, const OffspringKernel& q) {
  const int s = q.alphabet().size();
  const double d = g.default_value();
  std::vector<double> u(static_cast<std::size_t>(s));
  for (TypeId a = 0; a < s; ++a) {
    // sum_c e^g Q = sum_{map} (e^{g} - e^{d}) Q{c|a} + e^{d} * 1.
    double acc = std::exp(d);
    for (const auto& [key, val] : g.explicit_values()) {
      if (key.first != a) continue;
      const double bp = q.prob(a, key.second);
      if (bp > 0.0) acc += (std::exp(val) - std::exp(d)) * bp;
    }
    u[static_cast<std::size_t>(a)] = std::log(acc);
  }
  return u;
}

TiltedModel tilted_model(const OffspringKernel& q, const RootLaw& mu, const TiltFunction& g) {
  validate_root_law(q.alphabet(), mu);
  std::vector<double> u = u_g(g, q);

  RootLaw tilted_mu(mu.size());
  double norm = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    tilted_mu[a] = mu[a] * std::exp(u[a]);
    norm += tilted_mu[a];
  }
  for (double& v : tilted_mu) v /= norm;

  auto base = std::make_shared<const OffspringKernel>(q);
  return {OffspringKernel::tilted(std::move(base), g, u), std::move(tilted_mu)};
}

RnWeightForms log_rn_weight_forms(const TypedTree& tree, const TiltFunction& g,
                                  const OffspringKernel& q, const RootLaw& mu) {
  validate_root_law(q.alphabet(), mu);
  const std::vector<double> u = u_g(g, q);
  double log_norm = 0.0;
  {
    double acc = 0.0;
    for (std::size_t b = 0; b < mu.size(); ++b) acc += mu[b] * std::exp(u[b]);
    log_norm = std::log(acc);
  }

  RnWeightForms forms{};

  // Product route: e^{U(X(rho))} / int e^U dmu * prod_v e^{g(X(v),C(v)) - U(X(v))}.
  double product = u[static_cast<std::size_t>(tree.type(0))] - log_norm;
  for (int v = 0; v < tree.size(); ++v)
    product += g(tree.type(v), tree.config(v)) - u[static_cast<std::size_t>(tree.type(v))];
  forms.product_form = product;

  // Empirical route: n <g - sum_b m(b,.) U(b), M_X> - log int e^U dmu,
  // aggregated through the empirical offspring measure.
  const OffspringMeasure m_x = offspring_measure(tree, q.alphabet());
  double integrand = 0.0;
  for (const auto& [key, w] : m_x.atoms()) {
    double term = g(key.first, key.second);
    for (TypeId child : key.second.children()) term -= u[static_cast<std::size_t>(child)];
    integrand += w * term;
  }
  forms.empirical_form = static_cast<double>(tree.size()) * integrand - log_norm;

  return forms;
}

double log_rn_weight(const TypedTree& tree, const TiltFunction& g, const OffspringKernel& q,
                     const RootLaw& mu) {
  const RnWeightForms forms = log_rn_weight_forms(tree, g, q, mu);
  if (std::abs(forms.product_form - forms.empirical_form) > 1e-9)
    throw std::logic_error("log_rn_weight: the product and empirical forms disagree by " +
                           std::to_string(forms.product_form - forms.empirical_form));
  return forms.product_form;
}

namespace {

constexpr int kBlockSize = 1024;  // fixed reduction blocks, independent of thread count

struct BlockStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t hits = 0;
};

}  // namespace

EstimateReport estimate_prob(const OffspringKernel& q, const RootLaw& mu, int n,
                             const MeasureEvent& event, std::int64_t samples,
                             const TiltFunction& g, std::uint64_t seed, int threads) {
  if (samples < 1) throw std::invalid_argument("estimate_prob: samples must be positive");
  if (n < 1) throw std::invalid_argument("estimate_prob: n must be positive");

  const TiltedModel model = tilted_model(q, mu, g);
  const int blocks = static_cast<int>((samples + kBlockSize - 1) / kBlockSize);
  std::vector<BlockStats> partials(static_cast<std::size_t>(blocks));

  parallel_for_index(blocks, threads, [&](int block) {
    const std::int64_t begin = static_cast<std::int64_t>(block) * kBlockSize;
    const std::int64_t end = std::min(samples, begin + kBlockSize);
    BlockStats stats;
    for (std::int64_t i = begin; i < end; ++i) {
      RngStream rng(seed, static_cast<std::uint64_t>(i));
      std::optional<TypedTree> tree = sample_tree(model.kernel, model.root_law, rng, n);
      if (!tree || tree->size() != n) continue;
      const PairMeasure pair = pair_measure_tilde(*tree, q.alphabet());
      const OffspringMeasure off = offspring_measure(*tree, q.alphabet());
      if (!event(pair, off)) continue;
      const double w = std::exp(-log_rn_weight(*tree, g, q, mu));
      stats.sum += w;
      stats.sum_sq += w * w;
      stats.hits += 1;
    }
    partials[static_cast<std::size_t>(block)] = stats;
  });

  // Sequential combination in block order keeps the reduction bit-identical
  // for every worker count.
  BlockStats total;
  for (const BlockStats& b : partials) {
    total.sum += b.sum;
    total.sum_sq += b.sum_sq;
    total.hits += b.hits;
  }

  EstimateReport report;
  report.samples = samples;
  report.seed = seed;
  report.hits = total.hits;
  report.reliable = total.hits > 0;
  report.estimate = total.sum / static_cast<double>(samples);
  if (samples > 1) {
    const double var =
        std::max(0.0, (total.sum_sq - total.sum * total.sum / static_cast<double>(samples)) /
                          static_cast<double>(samples - 1));
    report.std_error = std::sqrt(var / static_cast<double>(samples));
  }
  report.effective_sample_size =
      total.sum_sq > 0.0 ? total.sum * total.sum / total.sum_sq : 0.0;
  return report;
}

ConditionalEstimate estimate_conditional(const OffspringKernel& q, const RootLaw& mu, int n,
                                         const MeasureEvent& event, std::int64_t samples,
                                         const TiltFunction& g, std::uint64_t seed, int threads) {
  // Shared samples: the same (seed, i) streams drive both joint estimates, so
  // the size-only pass replays exactly the same trees.
  const MeasureEvent always = [](const PairMeasure&, const OffspringMeasure&) { return true; };
  ConditionalEstimate out;
  out.joint = estimate_prob(q, mu, n, event, samples, g, seed, threads);
  out.size_only = estimate_prob(q, mu, n, always, samples, g, seed, threads);
  if (out.size_only.estimate <= 0.0) {
    out.value = 0.0;
    out.std_error = 0.0;
    return out;
  }
  out.value = out.joint.estimate / out.size_only.estimate;
  // Delta method for the ratio; the shared-sample covariance term is bounded
  // by the product of the standard errors and dropped (conservative).
  const double r = out.value;
  const double rel_num = out.joint.estimate > 0.0 ? out.joint.std_error / out.joint.estimate : 0.0;
  const double rel_den = out.size_only.std_error / out.size_only.estimate;
  out.std_error = std::abs(r) * std::sqrt(rel_num * rel_num + rel_den * rel_den);
  return out;
}

std::vector<DecayPoint> estimate_decay_rate(const OffspringKernel& q, const RootLaw& mu,
                                            const MeasureEvent& event,
                                            const std::vector<int>& n_list, std::int64_t samples,
                                            const TiltFunction& g, std::uint64_t seed,
                                            int threads) {
  std::vector<DecayPoint> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    const EstimateReport r = estimate_prob(q, mu, n, event, samples, g, seed, threads);
    DecayPoint point{n, r.estimate, r.std_error, 0.0, r.reliable};
    point.decay = r.estimate > 0.0 ? -std::log(r.estimate) / static_cast<double>(n)
                                   : std::numeric_limits<double>::infinity();
    out.push_back(point);
  }
  return out;
}

TiltFunction auto_tilt_from_measure(const OffspringMeasure& target, const OffspringKernel& q,
                                    double clip) {
  const std::vector<double> t1 = target.first_marginal();
  TiltFunction g;
  for (const auto& [key, w] : target.atoms()) {
    if (w <= 0.0) continue;
    const double ref = t1[static_cast<std::size_t>(key.first)] * q.prob(key.first, key.second);
    double value;
    if (ref <= 0.0) {
      value = clip;  // target support outside the kernel: steer as hard as allowed
    } else {
      value = std::clamp(std::log(w / ref), -clip, clip);
    }
    g.set(key.first, key.second, value);
  }
  return g;
}

}  // namespace gwldp
