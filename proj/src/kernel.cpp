#include "gwldp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gwldp {

namespace {

constexpr double kCriticalityTol = 1e-8;

void check_square_stochastic(const Matrix& t, int size) {
  if (t.rows != size || t.cols != size)
    throw std::invalid_argument("kernel: transition matrix must be " + std::to_string(size) +
                                "x" + std::to_string(size));
  for (int i = 0; i < size; ++i) {
    double row = 0.0;
    for (int j = 0; j < size; ++j) {
      if (t.at(i, j) < 0.0) throw std::invalid_argument("kernel: negative transition entry");
      row += t.at(i, j);
    }
    if (std::abs(row - 1.0) > 1e-12)
      throw std::invalid_argument("kernel: transition row " + std::to_string(i) + " sums to " +
                                  std::to_string(row));
  }
}

// Enumerates all type tuples of length n with the per-slot conditional
// weights T(parent -> .), multiplying into base_prob.
void enumerate_tuples(const Matrix& t, TypeId parent, int n, double base_prob,
                      std::vector<TypeId>& buf,
                      const std::function<void(const OffspringConfig&, double)>& fn) {
  if (static_cast<int>(buf.size()) == n) {
    fn(OffspringConfig(buf), base_prob);
    return;
  }
  for (TypeId a = 0; a < t.cols; ++a) {
    const double w = t.at(parent, a);
    if (w <= 0.0) continue;
    buf.push_back(a);
    enumerate_tuples(t, parent, n, base_prob * w, buf, fn);
    buf.pop_back();
  }
}

}  // namespace

OffspringKernel OffspringKernel::explicit_kernel(Alphabet alphabet, std::vector<ExplicitLaw> laws) {
  if (static_cast<int>(laws.size()) != alphabet.size())
    throw std::invalid_argument("kernel: one explicit law per type required");
  Explicit ex;
  ex.laws.resize(laws.size());
  for (std::size_t a = 0; a < laws.size(); ++a) {
    double sum = 0.0;
    auto& atoms = ex.laws[a].atoms;
    for (auto& [c, p] : laws[a].atoms) {
      if (p < 0.0)
        throw std::invalid_argument("kernel: negative probability for type " +
                                    alphabet.symbol(static_cast<TypeId>(a)));
      sum += p;
      if (p > 0.0) atoms.emplace_back(c, p);
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("kernel: law for type " + alphabet.symbol(static_cast<TypeId>(a)) +
                                  " sums to " + std::to_string(sum));
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 1; i < atoms.size(); ++i) {
      if (atoms[i - 1].first == atoms[i].first)
        throw std::invalid_argument("kernel: duplicate configuration for type " +
                                    alphabet.symbol(static_cast<TypeId>(a)));
    }
    for (const auto& [c, p] : atoms) ex.max_count = std::max(ex.max_count, c.count());
  }
  return OffspringKernel(std::move(alphabet), std::move(ex));
}

OffspringKernel OffspringKernel::factored(Alphabet alphabet, CountLaw counts, Matrix transition) {
  check_square_stochastic(transition, alphabet.size());
  if (!std::isfinite(counts.mean()))
    throw std::domain_error("kernel: offspring-count law must have finite mean");
  return OffspringKernel(std::move(alphabet), Factored{std::move(counts), std::move(transition)});
}

OffspringKernel OffspringKernel::tilted(std::shared_ptr<const OffspringKernel> base, TiltFunction g,
                                        std::vector<double> log_normalizers) {
  if (!base) throw std::invalid_argument("kernel: null tilt base");
  if (static_cast<int>(log_normalizers.size()) != base->alphabet().size())
    throw std::invalid_argument("kernel: one log normalizer per type required");
  Tilted t;
  t.g_max.resize(log_normalizers.size());
  for (TypeId a = 0; a < base->alphabet().size(); ++a)
    t.g_max[static_cast<std::size_t>(a)] = g.max_for_type(a);
  Alphabet alphabet = base->alphabet();
  t.base = std::move(base);
  t.g = std::move(g);
  t.u = std::move(log_normalizers);
  return OffspringKernel(std::move(alphabet), std::move(t));
}

double OffspringKernel::prob(TypeId a, const OffspringConfig& c) const {
  if (a < 0 || a >= alphabet_.size()) throw std::domain_error("kernel: type id out of range");
  if (const auto* ex = std::get_if<Explicit>(&form_)) {
    const auto& atoms = ex->laws[static_cast<std::size_t>(a)].atoms;
    auto it = std::lower_bound(atoms.begin(), atoms.end(), c,
                               [](const auto& atom, const OffspringConfig& key) { return atom.first < key; });
    return (it != atoms.end() && it->first == c) ? it->second : 0.0;
  }
  if (const auto* fa = std::get_if<Factored>(&form_)) {
    double p = fa->counts.pmf(c.count());
    for (TypeId child : c.children()) p *= fa->transition.at(a, child);
    return p;
  }
  const auto& ti = std::get<Tilted>(form_);
  const double base = ti.base->prob(a, c);
  if (base == 0.0) return 0.0;
  return base * std::exp(ti.g(a, c) - ti.u[static_cast<std::size_t>(a)]);
}

std::optional<int> OffspringKernel::support_bound() const {
  if (const auto* ex = std::get_if<Explicit>(&form_)) return ex->max_count;
  if (const auto* fa = std::get_if<Factored>(&form_)) return fa->counts.support_max();
  return std::get<Tilted>(form_).base->support_bound();
}

double OffspringKernel::mass_upto(TypeId a, int k) const {
  if (k < 0) return 0.0;
  if (const auto* ex = std::get_if<Explicit>(&form_)) {
    double s = 0.0;
    for (const auto& [c, p] : ex->laws[static_cast<std::size_t>(a)].atoms)
      if (c.count() <= k) s += p;
    return s;
  }
  if (const auto* fa = std::get_if<Factored>(&form_)) {
    return 1.0 - fa->counts.tail_mass_above(k);
  }
  // Tilted: exact via the finite explicit map plus the default-weighted
  // complement of the base mass.
  const auto& ti = std::get<Tilted>(form_);
  const double d = ti.g.default_value();
  double corr = 0.0;
  for (const auto& [key, val] : ti.g.explicit_values()) {
    if (key.first != a || key.second.count() > k) continue;
    const double bp = ti.base->prob(a, key.second);
    corr += (std::exp(val) - std::exp(d)) * bp;
  }
  const double base_mass = ti.base->mass_upto(a, k);
  return std::exp(-ti.u[static_cast<std::size_t>(a)]) * (corr + std::exp(d) * base_mass);
}

const CountLaw& OffspringKernel::count_law() const {
  if (const auto* fa = std::get_if<Factored>(&form_)) return fa->counts;
  throw std::logic_error("kernel: count_law() requires the factored form");
}

const Matrix& OffspringKernel::transition() const {
  if (const auto* fa = std::get_if<Factored>(&form_)) return fa->transition;
  throw std::logic_error("kernel: transition() requires the factored form");
}

const OffspringKernel& OffspringKernel::tilt_base() const {
  return *std::get<Tilted>(form_).base;
}
const TiltFunction& OffspringKernel::tilt_function() const { return std::get<Tilted>(form_).g; }
const std::vector<double>& OffspringKernel::tilt_log_normalizers() const {
  return std::get<Tilted>(form_).u;
}

OffspringConfig OffspringKernel::sample(TypeId a, RngStream& rng) const {
  if (const auto* ex = std::get_if<Explicit>(&form_)) {
    const auto& atoms = ex->laws[static_cast<std::size_t>(a)].atoms;
    double u = rng.uniform();
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
      if (u < atoms[i].second) return atoms[i].first;
      u -= atoms[i].second;
    }
    return atoms.back().first;
  }
  if (const auto* fa = std::get_if<Factored>(&form_)) {
    const int n = fa->counts.sample(rng);
    std::vector<TypeId> children(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double u = rng.uniform();
      TypeId child = alphabet_.size() - 1;
      for (TypeId b = 0; b < alphabet_.size() - 1; ++b) {
        if (u < fa->transition.at(a, b)) {
          child = b;
          break;
        }
        u -= fa->transition.at(a, b);
      }
      children[static_cast<std::size_t>(i)] = child;
    }
    return OffspringConfig(std::move(children));
  }
  // Tilted: rejection against the base with acceptance e^{g - g_max}.
  const auto& ti = std::get<Tilted>(form_);
  const double gmax = ti.g_max[static_cast<std::size_t>(a)];
  for (;;) {
    OffspringConfig c = ti.base->sample(a, rng);
    if (rng.uniform() < std::exp(ti.g(a, c) - gmax)) return c;
  }
}

void OffspringKernel::for_each_config(
    TypeId a, int max_count, const std::function<void(const OffspringConfig&, double)>& fn) const {
  if (const auto* ex = std::get_if<Explicit>(&form_)) {
    for (const auto& [c, p] : ex->laws[static_cast<std::size_t>(a)].atoms)
      if (c.count() <= max_count) fn(c, p);
    return;
  }
  if (const auto* fa = std::get_if<Factored>(&form_)) {
    std::vector<TypeId> buf;
    for (int n = 0; n <= max_count; ++n) {
      const double pn = fa->counts.pmf(n);
      if (pn <= 0.0) continue;
      buf.clear();
      buf.reserve(static_cast<std::size_t>(n));
      enumerate_tuples(fa->transition, a, n, pn, buf, fn);
    }
    return;
  }
  const auto& ti = std::get<Tilted>(form_);
  const double u_a = ti.u[static_cast<std::size_t>(a)];
  ti.base->for_each_config(a, max_count, [&](const OffspringConfig& c, double p) {
    fn(c, p * std::exp(ti.g(a, c) - u_a));
  });
}

const std::vector<std::pair<OffspringConfig, double>>& OffspringKernel::explicit_atoms(
    TypeId a) const {
  if (const auto* ex = std::get_if<Explicit>(&form_))
    return ex->laws[static_cast<std::size_t>(a)].atoms;
  throw std::logic_error("kernel: explicit_atoms() requires the explicit form");
}

MeanMatrix mean_matrix(const OffspringKernel& kernel) {
  const Alphabet& alphabet = kernel.alphabet();
  const int s = alphabet.size();
  Matrix a(s, s);

  if (kernel.is_factored()) {
    const double m = kernel.count_law().mean();
    if (!std::isfinite(m)) throw std::domain_error("mean_matrix: infinite offspring mean");
    for (TypeId parent = 0; parent < s; ++parent)
      for (TypeId child = 0; child < s; ++child)
        a.at(child, parent) = m * kernel.transition().at(parent, child);
    return {alphabet, std::move(a)};
  }

  if (kernel.is_explicit()) {
    for (TypeId parent = 0; parent < s; ++parent) {
      for (const auto& [c, p] : kernel.explicit_atoms(parent))
        for (TypeId child : c.children()) a.at(child, parent) += p;
    }
    return {alphabet, std::move(a)};
  }

  // Tilted: exact decomposition over the finite explicit map of g plus the
  // default-weighted base mean matrix.
  const OffspringKernel& base = kernel.tilt_base();
  const TiltFunction& g = kernel.tilt_function();
  const auto& u = kernel.tilt_log_normalizers();
  const MeanMatrix base_mean = mean_matrix(base);
  const double ed = std::exp(g.default_value());
  for (TypeId parent = 0; parent < s; ++parent) {
    for (TypeId child = 0; child < s; ++child)
      a.at(child, parent) = ed * base_mean.at(child, parent);
  }
  for (const auto& [key, val] : g.explicit_values()) {
    const TypeId parent = key.first;
    const double bp = base.prob(parent, key.second);
    if (bp == 0.0) continue;
    const double w = (std::exp(val) - ed) * bp;
    for (TypeId child : key.second.children()) a.at(child, parent) += w;
  }
  for (TypeId parent = 0; parent < s; ++parent) {
    const double scale = std::exp(-u[static_cast<std::size_t>(parent)]);
    for (TypeId child = 0; child < s; ++child) a.at(child, parent) *= scale;
  }
  return {alphabet, std::move(a)};
}

IrreducibilityReport classify(const MeanMatrix& mean) {
  const int s = mean.alphabet.size();
  IrreducibilityReport report;
  report.right_eigenvector.assign(static_cast<std::size_t>(s), 0.0);
  report.left_eigenvector.assign(static_cast<std::size_t>(s), 0.0);

  // reach[b][a]: a is reachable from b in >= 1 step along b -> child edges.
  // A*(a,b) > 0 is exactly this relation; decided on the support, not by sums.
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(s),
                                       std::vector<bool>(static_cast<std::size_t>(s), false));
  for (TypeId b = 0; b < s; ++b)
    for (TypeId a = 0; a < s; ++a)
      if (mean.at(a, b) > 0.0) reach[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
  for (int mid = 0; mid < s; ++mid)
    for (int from = 0; from < s; ++from)
      for (int to = 0; to < s; ++to)
        if (reach[static_cast<std::size_t>(from)][static_cast<std::size_t>(mid)] &&
            reach[static_cast<std::size_t>(mid)][static_cast<std::size_t>(to)])
          reach[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)] = true;

  // Recurrent types are exactly those reaching every type; the partition is
  // valid when every other type avoids cycles through itself and never
  // reaches a recurrent type.
  std::vector<bool> recurrent(static_cast<std::size_t>(s), false);
  for (TypeId b = 0; b < s; ++b) {
    bool all = true;
    for (TypeId a = 0; a < s; ++a) all = all && reach[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
    recurrent[static_cast<std::size_t>(b)] = all;
  }

  bool valid = false;
  for (TypeId b = 0; b < s; ++b) valid = valid || recurrent[static_cast<std::size_t>(b)];
  for (TypeId b = 0; b < s && valid; ++b) {
    if (recurrent[static_cast<std::size_t>(b)]) continue;
    if (reach[static_cast<std::size_t>(b)][static_cast<std::size_t>(b)]) valid = false;
    for (TypeId a = 0; a < s && valid; ++a)
      if (recurrent[static_cast<std::size_t>(a)] && reach[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)])
        valid = false;
  }

  if (!valid) {
    report.weakly_irreducible = false;
    for (TypeId b = 0; b < s; ++b) report.transient.push_back(b);
    return report;
  }

  report.weakly_irreducible = true;
  for (TypeId b = 0; b < s; ++b)
    (recurrent[static_cast<std::size_t>(b)] ? report.recurrent : report.transient).push_back(b);

  const int r = static_cast<int>(report.recurrent.size());
  Matrix block(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      block.at(i, j) = mean.at(report.recurrent[static_cast<std::size_t>(i)],
                               report.recurrent[static_cast<std::size_t>(j)]);

  const PowerResult right = power_iteration(block, 1e-12);
  Matrix block_t(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) block_t.at(i, j) = block.at(j, i);
  const PowerResult left = power_iteration(block_t, 1e-12);

  report.pf_eigenvalue = right.eigenvalue;
  report.critical = std::abs(right.eigenvalue - 1.0) <= kCriticalityTol;
  for (int i = 0; i < r; ++i) {
    report.right_eigenvector[static_cast<std::size_t>(report.recurrent[static_cast<std::size_t>(i)])] =
        right.eigenvector[static_cast<std::size_t>(i)];
    report.left_eigenvector[static_cast<std::size_t>(report.recurrent[static_cast<std::size_t>(i)])] =
        left.eigenvector[static_cast<std::size_t>(i)];
  }
  return report;
}

namespace {

std::optional<int> transient_bound(const OffspringKernel& kernel,
                                   const std::vector<TypeId>& transient) {
  if (transient.empty()) return 0;
  std::vector<bool> is_transient(static_cast<std::size_t>(kernel.alphabet().size()), false);
  for (TypeId t : transient) is_transient[static_cast<std::size_t>(t)] = true;

  if (kernel.is_tilted()) return transient_bound(kernel.tilt_base(), transient);

  if (kernel.is_explicit()) {
    int bound = 0;
    for (TypeId a = 0; a < kernel.alphabet().size(); ++a) {
      for (const auto& [c, p] : kernel.explicit_atoms(a)) {
        int m = 0;
        for (TypeId child : c.children())
          if (is_transient[static_cast<std::size_t>(child)]) ++m;
        bound = std::max(bound, m);
      }
    }
    return bound;
  }

  // Factored: transient offspring counts are bounded iff either no type ever
  // produces a transient child or the count law itself is bounded.
  bool reaches_transient = false;
  for (TypeId parent = 0; parent < kernel.alphabet().size(); ++parent)
    for (TypeId t : transient)
      if (kernel.transition().at(parent, t) > 0.0) reaches_transient = true;
  if (!reaches_transient) return 0;
  return kernel.count_law().support_max();
}

}  // namespace

IrreducibilityReport analyze_kernel(const OffspringKernel& kernel) {
  IrreducibilityReport report = classify(mean_matrix(kernel));
  report.transient_offspring_bound = transient_bound(kernel, report.transient);
  return report;
}

OffspringKernel truncate_kernel(const OffspringKernel& kernel, int k) {
  if (k < 0) throw std::invalid_argument("truncate_kernel: k must be nonnegative");
  for (TypeId a = 0; a < kernel.alphabet().size(); ++a) {
    if (kernel.mass_upto(a, k) <= 0.0)
      throw std::domain_error("truncate_kernel: type " + kernel.alphabet().symbol(a) +
                              " has zero mass on configurations with at most " +
                              std::to_string(k) + " children");
  }

  if (kernel.is_explicit()) {
    std::vector<ExplicitLaw> laws(static_cast<std::size_t>(kernel.alphabet().size()));
    for (TypeId a = 0; a < kernel.alphabet().size(); ++a) {
      const double mass = kernel.mass_upto(a, k);
      for (const auto& [c, p] : kernel.explicit_atoms(a))
        if (c.count() <= k) laws[static_cast<std::size_t>(a)].atoms.emplace_back(c, p / mass);
    }
    return OffspringKernel::explicit_kernel(kernel.alphabet(), std::move(laws));
  }

  if (kernel.is_factored()) {
    // Conditioning on X_k* renormalizes only the count law; the per-child
    // transition factors are untouched.
    const CountLaw& p = kernel.count_law();
    const double mass = 1.0 - p.tail_mass_above(k);
    std::vector<double> table(static_cast<std::size_t>(k) + 1, 0.0);
    for (int n = 0; n <= k; ++n) table[static_cast<std::size_t>(n)] = p.pmf(n) / mass;
    double sum = 0.0;
    for (double v : table) sum += v;
    for (double& v : table) v /= sum;  // exact renormalization for the 1e-12 gate
    return OffspringKernel::factored(kernel.alphabet(), CountLaw::table(std::move(table)),
                                     kernel.transition());
  }

  // Tilting and conditioning on X_k* commute: the two normalizers cancel.
  const OffspringKernel truncated_base = truncate_kernel(kernel.tilt_base(), k);
  auto base_ptr = std::make_shared<const OffspringKernel>(truncated_base);
  const TiltFunction& g = kernel.tilt_function();
  std::vector<double> u(static_cast<std::size_t>(kernel.alphabet().size()));
  for (TypeId a = 0; a < kernel.alphabet().size(); ++a) {
    // U_g over the truncated base, via the finite-map decomposition.
    const double d = g.default_value();
    double acc = 0.0, map_mass = 0.0;
    for (const auto& [key, val] : g.explicit_values()) {
      if (key.first != a) continue;
      const double bp = base_ptr->prob(a, key.second);
      acc += std::exp(val) * bp;
      map_mass += bp;
    }
    u[static_cast<std::size_t>(a)] = std::log(acc + std::exp(d) * (1.0 - map_mass));
  }
  return OffspringKernel::tilted(std::move(base_ptr), g, std::move(u));
}

OffspringKernel factored_kernel(const CountLaw& counts, const Matrix& transition,
                                const Alphabet& alphabet) {
  return OffspringKernel::factored(alphabet, counts, transition);
}

double kernel_tv_per_type(const OffspringKernel& q1, const OffspringKernel& q2, TypeId a) {
  if (q1.is_factored() && q2.is_factored() && q1.transition() == q2.transition()) {
    // Identical per-child factors: the TV collapses onto the count laws.
    return q1.count_law().tv_distance(q2.count_law());
  }
  const auto b1 = q1.support_bound();
  const auto b2 = q2.support_bound();
  if (!b1 || !b2)
    throw std::invalid_argument(
        "kernel_tv_per_type: needs bounded supports or matching factored transitions");
  const int k = std::max(*b1, *b2);
  std::map<OffspringConfig, double> diff;
  q1.for_each_config(a, k, [&](const OffspringConfig& c, double p) { diff[c] += p; });
  q2.for_each_config(a, k, [&](const OffspringConfig& c, double p) { diff[c] -= p; });
  double acc = 0.0;
  for (const auto& [c, d] : diff) acc += std::abs(d);
  return 0.5 * acc;
}

}  // namespace gwldp
