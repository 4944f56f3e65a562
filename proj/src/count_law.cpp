#include "gwldp/count_law.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gwldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stable weights w(n) = p(n) e^{lam n} for a finite table, shifted so the
// largest exponent is 0. Returns (log shift, weights).
struct ShiftedWeights {
  double log_shift;
  std::vector<double> w;
};

ShiftedWeights shifted_weights(const std::vector<double>& p, double lam) {
  double m = -kInf;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n] > 0.0) m = std::max(m, lam * static_cast<double>(n) + std::log(p[n]));
  }
  ShiftedWeights out;
  out.log_shift = m;
  out.w.resize(p.size(), 0.0);
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n] > 0.0) out.w[n] = std::exp(lam * static_cast<double>(n) + std::log(p[n]) - m);
  }
  return out;
}

}  // namespace

CountLaw CountLaw::table(std::vector<double> p) {
  if (p.empty()) throw std::invalid_argument("count law: empty table");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw std::invalid_argument("count law: negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("count law: table sums to " + std::to_string(sum));
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  CountLaw law;
  law.kind_ = Kind::Table;
  law.table_ = std::move(p);
  return law;
}

CountLaw CountLaw::geometric(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("count law: geometric q must be in (0,1)");
  CountLaw law;
  law.kind_ = Kind::Geometric;
  law.q_ = q;
  return law;
}

CountLaw CountLaw::poisson(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("count law: poisson lambda must be positive");
  CountLaw law;
  law.kind_ = Kind::Poisson;
  law.lambda_ = lambda;
  return law;
}

std::string CountLaw::family_name() const {
  switch (kind_) {
    case Kind::Table: return "table";
    case Kind::Geometric: return "geometric";
    case Kind::Poisson: return "poisson";
  }
  return "?";
}

double CountLaw::pmf(int n) const {
  if (n < 0) return 0.0;
  switch (kind_) {
    case Kind::Table:
      return n < static_cast<int>(table_.size()) ? table_[static_cast<std::size_t>(n)] : 0.0;
    case Kind::Geometric:
      return q_ * std::pow(1.0 - q_, n);
    case Kind::Poisson: {
      // Recurrence keeps this exact to rounding without lgamma.
      double v = std::exp(-lambda_);
      for (int i = 1; i <= n; ++i) v *= lambda_ / i;
      return v;
    }
  }
  return 0.0;
}

double CountLaw::mean() const {
  switch (kind_) {
    case Kind::Table: {
      double m = 0.0;
      for (std::size_t n = 0; n < table_.size(); ++n) m += static_cast<double>(n) * table_[n];
      return m;
    }
    case Kind::Geometric:
      return (1.0 - q_) / q_;
    case Kind::Poisson:
      return lambda_;
  }
  return 0.0;
}

std::optional<int> CountLaw::support_max() const {
  if (kind_ != Kind::Table) return std::nullopt;
  for (int n = static_cast<int>(table_.size()) - 1; n >= 0; --n) {
    if (table_[static_cast<std::size_t>(n)] > 0.0) return n;
  }
  return 0;
}

double CountLaw::tail_mass_above(int k) const {
  if (k < 0) return 1.0;
  switch (kind_) {
    case Kind::Table: {
      double t = 0.0;
      for (std::size_t n = static_cast<std::size_t>(k) + 1; n < table_.size(); ++n) t += table_[n];
      return t;
    }
    case Kind::Geometric:
      return std::pow(1.0 - q_, k + 1);
    case Kind::Poisson: {
      double cdf = 0.0, term = std::exp(-lambda_);
      for (int n = 0; n <= k; ++n) {
        cdf += term;
        term *= lambda_ / (n + 1);
      }
      return std::max(0.0, 1.0 - cdf);
    }
  }
  return 0.0;
}

int CountLaw::enumeration_cutoff(double tail_mass) const {
  if (auto m = support_max()) return *m;
  int k = 0;
  while (tail_mass_above(k) > tail_mass && k < 100000) ++k;
  return k;
}

double CountLaw::mgf_boundary() const {
  return kind_ == Kind::Geometric ? -std::log1p(-q_) : kInf;
}

double CountLaw::log_mgf(double lam) const {
  switch (kind_) {
    case Kind::Table: {
      const auto sw = shifted_weights(table_, lam);
      double s = 0.0;
      for (double w : sw.w) s += w;
      return sw.log_shift + std::log(s);
    }
    case Kind::Geometric: {
      const double u = (1.0 - q_) * std::exp(lam);
      if (u >= 1.0)
        throw std::domain_error("count law: geometric log-MGF is finite only for lambda < " +
                                std::to_string(mgf_boundary()));
      return std::log(q_) - std::log1p(-u);
    }
    case Kind::Poisson:
      return lambda_ * std::expm1(lam);
  }
  return 0.0;
}

double CountLaw::log_mgf_d1(double lam) const {
  switch (kind_) {
    case Kind::Table: {
      const auto sw = shifted_weights(table_, lam);
      double s = 0.0, s1 = 0.0;
      for (std::size_t n = 0; n < sw.w.size(); ++n) {
        s += sw.w[n];
        s1 += static_cast<double>(n) * sw.w[n];
      }
      return s1 / s;
    }
    case Kind::Geometric: {
      const double u = (1.0 - q_) * std::exp(lam);
      if (u >= 1.0)
        throw std::domain_error("count law: geometric log-MGF is finite only for lambda < " +
                                std::to_string(mgf_boundary()));
      return u / (1.0 - u);
    }
    case Kind::Poisson:
      return lambda_ * std::exp(lam);
  }
  return 0.0;
}

double CountLaw::log_mgf_d2(double lam) const {
  switch (kind_) {
    case Kind::Table: {
      const auto sw = shifted_weights(table_, lam);
      double s = 0.0, s1 = 0.0, s2 = 0.0;
      for (std::size_t n = 0; n < sw.w.size(); ++n) {
        const double x = static_cast<double>(n);
        s += sw.w[n];
        s1 += x * sw.w[n];
        s2 += x * x * sw.w[n];
      }
      const double m = s1 / s;
      return s2 / s - m * m;
    }
    case Kind::Geometric: {
      const double u = (1.0 - q_) * std::exp(lam);
      if (u >= 1.0)
        throw std::domain_error("count law: geometric log-MGF is finite only for lambda < " +
                                std::to_string(mgf_boundary()));
      return u / ((1.0 - u) * (1.0 - u));
    }
    case Kind::Poisson:
      return lambda_ * std::exp(lam);
  }
  return 0.0;
}

CountLaw CountLaw::tilt(double theta) const {
  switch (kind_) {
    case Kind::Table: {
      const auto sw = shifted_weights(table_, theta);
      double s = 0.0;
      for (double w : sw.w) s += w;
      std::vector<double> p(sw.w.size());
      for (std::size_t n = 0; n < p.size(); ++n) p[n] = sw.w[n] / s;
      return table(std::move(p));
    }
    case Kind::Geometric: {
      const double u = (1.0 - q_) * std::exp(theta);
      if (u >= 1.0)
        throw std::domain_error("count law: tilt outside the geometric MGF domain");
      return geometric(1.0 - u);
    }
    case Kind::Poisson:
      return poisson(lambda_ * std::exp(theta));
  }
  throw std::logic_error("count law: unknown kind");
}

int CountLaw::sample(RngStream& rng) const {
  double u = rng.uniform();
  switch (kind_) {
    case Kind::Table: {
      const int last = static_cast<int>(table_.size()) - 1;
      for (int n = 0; n < last; ++n) {
        if (u < table_[static_cast<std::size_t>(n)]) return n;
        u -= table_[static_cast<std::size_t>(n)];
      }
      return last;
    }
    case Kind::Geometric: {
      // Inverse CDF by multiplicative recurrence; arithmetic only.
      int n = 0;
      double pmf_n = q_;
      while (u >= pmf_n) {
        u -= pmf_n;
        pmf_n *= (1.0 - q_);
        ++n;
        if (n > 1 << 26) break;  // u rounding guard; probability ~0
      }
      return n;
    }
    case Kind::Poisson: {
      int n = 0;
      double pmf_n = std::exp(-lambda_);
      while (u >= pmf_n) {
        u -= pmf_n;
        pmf_n *= lambda_ / (n + 1);
        ++n;
        if (n > 1 << 26) break;
      }
      return n;
    }
  }
  return 0;
}

double CountLaw::tv_distance(const CountLaw& other) const {
  const int k1 = enumeration_cutoff(1e-16);
  const int k2 = other.enumeration_cutoff(1e-16);
  const int k = std::max(k1, k2);
  double acc = 0.0;
  for (int n = 0; n <= k; ++n) acc += std::abs(pmf(n) - other.pmf(n));
  acc += tail_mass_above(k) + other.tail_mass_above(k);
  return 0.5 * acc;
}

CriticalTilt tilt_to_critical(const CountLaw& p) {
  const double p0 = p.pmf(0);
  const double p1 = p.pmf(1);
  if (!(p0 > 0.0 && p0 < 1.0 - p1))
    throw std::domain_error("tilt_to_critical: requires 0 < p(0) < 1 - p(1)");

  const double boundary = p.mgf_boundary();
  const auto mean_at = [&](double th) { return p.log_mgf_d1(th); };

  // Already critical: keep theta* exactly zero.
  if (std::abs(mean_at(0.0) - 1.0) <= 1e-12) return {0.0, p};

  const double hi_cap = std::isfinite(boundary) ? boundary : 700.0;
  double lo = -1.0;
  double hi = std::min(1.0, 0.5 * hi_cap + 0.5 * std::min(1.0, hi_cap));
  if (std::isfinite(boundary)) hi = std::min(1.0, 0.5 * boundary);

  while (mean_at(lo) > 1.0) {
    lo *= 2.0;
    if (lo < -700.0)
      throw std::domain_error("tilt_to_critical: tilted mean stays above 1 down to theta=-700");
  }
  while (mean_at(hi) < 1.0) {
    const double next = std::isfinite(boundary) ? 0.5 * (hi + boundary) : hi * 2.0;
    if (!std::isfinite(boundary) && next > 700.0)
      throw std::domain_error("tilt_to_critical: tilted mean stays below 1 up to theta=700");
    if (std::isfinite(boundary) && boundary - next < 1e-300)
      throw std::domain_error(
          "tilt_to_critical: mean 1 not reached inside the MGF domain (boundary " +
          std::to_string(boundary) + ")");
    hi = next;
  }

  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double m = mean_at(mid);
    if (std::abs(m - 1.0) <= 1e-12) {
      lo = hi = mid;
      break;
    }
    (m < 1.0 ? lo : hi) = mid;
    if (hi - lo < 1e-16 * std::max(1.0, std::abs(lo))) break;
  }
  const double theta = 0.5 * (lo + hi);
  CountLaw tilted = p.tilt(theta);
  if (std::abs(tilted.mean() - 1.0) > 1e-10)
    throw std::domain_error("tilt_to_critical: bisection failed to reach mean 1");
  return {theta, tilted};
}

}  // namespace gwldp
