#include "gwldp/measures.hpp"

#include <cmath>
#include <stdexcept>

#include "gwldp/io.hpp"

namespace gwldp {

void OffspringMeasure::add(TypeId a, OffspringConfig c, double w) {
  if (w == 0.0) return;
  atoms_[Key(a, std::move(c))] += w;
}

void OffspringMeasure::set(TypeId a, OffspringConfig c, double w) {
  if (w == 0.0) {
    atoms_.erase(Key(a, c));
    return;
  }
  atoms_[Key(a, std::move(c))] = w;
}

double OffspringMeasure::mass() const {
  double s = 0.0;
  for (const auto& [k, w] : atoms_) s += w;
  return s;
}

double OffspringMeasure::first_moment() const {
  double s = 0.0;
  for (const auto& [k, w] : atoms_) s += static_cast<double>(k.second.count()) * w;
  return s;
}

std::vector<double> OffspringMeasure::first_marginal() const {
  std::vector<double> m(static_cast<std::size_t>(alphabet_.size()), 0.0);
  for (const auto& [k, w] : atoms_) m[static_cast<std::size_t>(k.first)] += w;
  return m;
}

std::string OffspringMeasure::to_csv() const {
  std::string out = "type,count,children,weight\n";
  for (const auto& [k, w] : atoms_) {
    out += alphabet_.symbol(k.first);
    out += ',';
    out += std::to_string(k.second.count());
    out += ',';
    bool first = true;
    for (TypeId child : k.second.children()) {
      if (!first) out += '|';
      out += alphabet_.symbol(child);
      first = false;
    }
    out += ',';
    out += format_double(w);
    out += '\n';
  }
  return out;
}

OffspringMeasure OffspringMeasure::from_csv(const Alphabet& alphabet, std::string_view text) {
  OffspringMeasure m(alphabet);
  bool header_seen = false;
  for (std::string_view line : lines_of(text)) {
    if (!header_seen) {
      if (line != "type,count,children,weight")
        throw std::invalid_argument("offspring measure csv: bad header '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 4)
      throw std::invalid_argument("offspring measure csv: bad row '" + std::string(line) + "'");
    const TypeId a = alphabet.index_of(fields[0]);
    const long count = parse_long(fields[1]);
    std::vector<TypeId> children;
    if (!fields[2].empty()) {
      for (std::string_view label : split(fields[2], '|')) children.push_back(alphabet.index_of(label));
    }
    if (static_cast<long>(children.size()) != count)
      throw std::invalid_argument("offspring measure csv: count/children mismatch in '" +
                                  std::string(line) + "'");
    m.add(a, OffspringConfig(std::move(children)), parse_double(fields[3]));
  }
  if (!header_seen) throw std::invalid_argument("offspring measure csv: empty document");
  return m;
}

double PairMeasure::mass() const {
  double s = 0.0;
  for (double w : w_) s += w;
  return s;
}

std::vector<double> PairMeasure::first_marginal() const {
  std::vector<double> m(static_cast<std::size_t>(size()), 0.0);
  for (TypeId a = 0; a < size(); ++a)
    for (TypeId b = 0; b < size(); ++b) m[static_cast<std::size_t>(a)] += at(a, b);
  return m;
}

std::vector<double> PairMeasure::second_marginal() const {
  std::vector<double> m(static_cast<std::size_t>(size()), 0.0);
  for (TypeId a = 0; a < size(); ++a)
    for (TypeId b = 0; b < size(); ++b) m[static_cast<std::size_t>(b)] += at(a, b);
  return m;
}

std::string PairMeasure::to_csv() const {
  std::string out = "from,to,weight\n";
  for (TypeId a = 0; a < size(); ++a) {
    for (TypeId b = 0; b < size(); ++b) {
      out += alphabet_.symbol(a);
      out += ',';
      out += alphabet_.symbol(b);
      out += ',';
      out += format_double(at(a, b));
      out += '\n';
    }
  }
  return out;
}

PairMeasure PairMeasure::from_csv(const Alphabet& alphabet, std::string_view text) {
  PairMeasure m(alphabet);
  bool header_seen = false;
  for (std::string_view line : lines_of(text)) {
    if (!header_seen) {
      if (line != "from,to,weight")
        throw std::invalid_argument("pair measure csv: bad header '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 3)
      throw std::invalid_argument("pair measure csv: bad row '" + std::string(line) + "'");
    m.add(alphabet.index_of(fields[0]), alphabet.index_of(fields[1]), parse_double(fields[2]));
  }
  if (!header_seen) throw std::invalid_argument("pair measure csv: empty document");
  return m;
}

OffspringMeasure offspring_measure(const TypedTree& tree, const Alphabet& alphabet) {
  OffspringMeasure m(alphabet);
  const double inv = 1.0 / tree.size();
  // Integer counts first; one division per atom keeps the mass exact-ish.
  std::map<OffspringMeasure::Key, long> counts;
  for (int v = 0; v < tree.size(); ++v)
    ++counts[OffspringMeasure::Key(tree.type(v), tree.config(v))];
  for (auto& [key, c] : counts) m.set(key.first, key.second, static_cast<double>(c) * inv);
  return m;
}

PairMeasure pair_measure_tilde(const TypedTree& tree, const Alphabet& alphabet) {
  PairMeasure m(alphabet);
  const double inv = 1.0 / tree.size();
  std::vector<long> counts(static_cast<std::size_t>(alphabet.size()) *
                               static_cast<std::size_t>(alphabet.size()),
                           0);
  for (int v = 1; v < tree.size(); ++v) {
    const TypeId from = tree.type(tree.vertex(v).parent);
    const TypeId to = tree.type(v);
    ++counts[static_cast<std::size_t>(from) * static_cast<std::size_t>(alphabet.size()) +
             static_cast<std::size_t>(to)];
  }
  for (TypeId a = 0; a < alphabet.size(); ++a)
    for (TypeId b = 0; b < alphabet.size(); ++b) {
      const long c = counts[static_cast<std::size_t>(a) * static_cast<std::size_t>(alphabet.size()) +
                            static_cast<std::size_t>(b)];
      if (c != 0) m.set(a, b, static_cast<double>(c) * inv);
    }
  return m;
}

PairMeasure pair_measure(const TypedTree& tree, const Alphabet& alphabet) {
  const int n = tree.size();
  if (n < 2) throw std::domain_error("pair_measure: a single-vertex tree has no edges");
  PairMeasure m = pair_measure_tilde(tree, alphabet);
  const double scale = static_cast<double>(n) / (n - 1);
  for (TypeId a = 0; a < alphabet.size(); ++a)
    for (TypeId b = 0; b < alphabet.size(); ++b) m.set(a, b, m.at(a, b) * scale);
  return m;
}

PairMeasure induced_pair(const OffspringMeasure& nu) {
  PairMeasure m(nu.alphabet());
  for (const auto& [key, w] : nu.atoms()) {
    for (TypeId child : key.second.children()) m.add(key.first, child, w);
  }
  return m;
}

ConsistencyClass check_consistency(const PairMeasure& pair, const OffspringMeasure& nu,
                                   double tol) {
  if (!(pair.alphabet() == nu.alphabet()))
    throw std::invalid_argument("check_consistency: alphabets differ");
  const PairMeasure rhs = induced_pair(nu);
  double max_abs = 0.0, min_d = 0.0;
  for (TypeId a = 0; a < pair.size(); ++a)
    for (TypeId b = 0; b < pair.size(); ++b) {
      const double d = pair.at(a, b) - rhs.at(a, b);
      max_abs = std::max(max_abs, std::abs(d));
      min_d = std::min(min_d, d);
    }
  if (max_abs <= tol) return ConsistencyClass::Consistent;
  if (min_d >= -tol) return ConsistencyClass::SubConsistent;
  return ConsistencyClass::Neither;
}

std::vector<double> nu_first(const OffspringMeasure& nu) { return nu.first_marginal(); }
std::vector<double> pair_second(const PairMeasure& pair) { return pair.second_marginal(); }

double tv_distance(const OffspringMeasure& x, const OffspringMeasure& y) {
  double acc = 0.0;
  auto ix = x.atoms().begin();
  auto iy = y.atoms().begin();
  while (ix != x.atoms().end() || iy != y.atoms().end()) {
    if (iy == y.atoms().end() || (ix != x.atoms().end() && ix->first < iy->first)) {
      acc += std::abs(ix->second);
      ++ix;
    } else if (ix == x.atoms().end() || iy->first < ix->first) {
      acc += std::abs(iy->second);
      ++iy;
    } else {
      acc += std::abs(ix->second - iy->second);
      ++ix;
      ++iy;
    }
  }
  return 0.5 * acc;
}

double tv_distance(const PairMeasure& x, const PairMeasure& y) {
  if (!(x.alphabet() == y.alphabet()))
    throw std::invalid_argument("tv_distance: alphabets differ");
  double acc = 0.0;
  for (TypeId a = 0; a < x.size(); ++a)
    for (TypeId b = 0; b < x.size(); ++b) acc += std::abs(x.at(a, b) - y.at(a, b));
  return 0.5 * acc;
}

OffspringMeasure truncate_measure(const OffspringMeasure& nu, int k) {
  double mass_k = 0.0;
  for (const auto& [key, w] : nu.atoms())
    if (key.second.count() <= k) mass_k += w;
  if (mass_k <= 0.0)
    throw std::domain_error("truncate_measure: no mass on configurations with at most " +
                            std::to_string(k) + " children");
  OffspringMeasure out(nu.alphabet());
  for (const auto& [key, w] : nu.atoms())
    if (key.second.count() <= k) out.set(key.first, key.second, w / mass_k);
  return out;
}

std::pair<PairMeasure, OffspringMeasure> repair_consistency(const PairMeasure& pair,
                                                            const OffspringMeasure& nu,
                                                            long n) {
  if (!(pair.alphabet() == nu.alphabet()))
    throw std::invalid_argument("repair_consistency: alphabets differ");
  if (n < 1) throw std::invalid_argument("repair_consistency: n must be positive");
  const PairMeasure mnu = induced_pair(nu);

  double deficit_total = 0.0;
  for (TypeId a = 0; a < pair.size(); ++a)
    for (TypeId b = 0; b < pair.size(); ++b) {
      const double d = pair.at(a, b) - mnu.at(a, b);
      if (d < -1e-12)
        throw std::invalid_argument("repair_consistency: input is not sub-consistent");
      if (d > 0.0) deficit_total += d;
    }

  const double scale = 1.0 - deficit_total / static_cast<double>(n);
  if (scale < 0.0)
    throw std::domain_error("repair_consistency: negative mass scale at n=" + std::to_string(n) +
                            "; use n > " + std::to_string(deficit_total) + " (the total deficit)");

  OffspringMeasure nu_hat(nu.alphabet());
  for (const auto& [key, w] : nu.atoms()) nu_hat.set(key.first, key.second, w * scale);
  for (TypeId a = 0; a < pair.size(); ++a) {
    for (TypeId b = 0; b < pair.size(); ++b) {
      const double d = pair.at(a, b) - mnu.at(a, b);
      if (d <= 0.0) continue;
      // Fresh atom on the configuration with exactly n children, all of
      // type b; its multiplicity vector is n e^(b), so it feeds only the
      // (a,b) consistency entry.
      nu_hat.add(a, OffspringConfig::uniform(b, static_cast<int>(n)),
                 d / static_cast<double>(n));
    }
  }
  return {induced_pair(nu_hat), nu_hat};
}

}  // namespace gwldp
