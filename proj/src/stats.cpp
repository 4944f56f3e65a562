#include "gwldp/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <stdexcept>

namespace gwldp {

double chi_squared_pvalue(double statistic, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_squared_pvalue: dof must be positive");
  if (statistic <= 0.0) return 1.0;
  const boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

ChiSquareResult chi_square_test(const std::vector<long>& observed,
                                const std::vector<double>& probabilities, long total,
                                double min_expected) {
  if (observed.size() != probabilities.size())
    throw std::invalid_argument("chi_square_test: size mismatch");

  double stat = 0.0;
  int cells = 0;
  double pooled_expected = 0.0;
  long pooled_observed = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * static_cast<double>(total);
    if (expected < min_expected) {
      pooled_expected += expected;
      pooled_observed += observed[i];
      continue;
    }
    const double d = static_cast<double>(observed[i]) - expected;
    stat += d * d / expected;
    ++cells;
  }
  if (pooled_expected > 0.0) {
    const double d = static_cast<double>(pooled_observed) - pooled_expected;
    stat += d * d / pooled_expected;
    ++cells;
  }
  if (cells < 2) throw std::invalid_argument("chi_square_test: fewer than two usable cells");
  const int dof = cells - 1;
  return {stat, dof, chi_squared_pvalue(stat, dof), cells};
}

}  // namespace gwldp
