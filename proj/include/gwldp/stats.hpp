#pragma once

#include <string>
#include <vector>

namespace gwldp {

// Upper-tail p-value of a chi-squared statistic with the given dof.
double chi_squared_pvalue(double statistic, int dof);

/// Pearson goodness-of-fit against enumerated class probabilities.
struct ChiSquareResult {
  double statistic;
  int dof;
  double p_value;
  int cells;  // after pooling sparse cells
};

/**
 * Observed counts vs expected probabilities (which must sum to ~1 over the
 * listed classes). Cells with expected count below min_expected are pooled
 * into one remainder cell.
 */
ChiSquareResult chi_square_test(const std::vector<long>& observed,
                                const std::vector<double>& probabilities, long total,
                                double min_expected = 5.0);

}  // namespace gwldp
