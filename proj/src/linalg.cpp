#include "gwldp/linalg.hpp"

#include <cmath>

namespace gwldp {

PowerResult power_iteration(const Matrix& a, double rel_tol, int max_iter) {
  if (a.rows != a.cols || a.rows == 0) throw std::invalid_argument("power iteration: square matrix required");
  const int n = a.rows;

  if (n == 1) return {a.at(0, 0), {1.0}, true};

  std::vector<double> v(static_cast<std::size_t>(n), 1.0 / n), w(static_cast<std::size_t>(n));
  double lambda_shifted = 1.0;
  bool converged = false;

  for (int it = 0; it < max_iter; ++it) {
    // w = (A + I) v
    for (int i = 0; i < n; ++i) {
      double s = v[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) s += a.at(i, j) * v[static_cast<std::size_t>(j)];
      w[static_cast<std::size_t>(i)] = s;
    }
    double norm = 0.0;
    for (double x : w) norm += std::abs(x);
    if (norm == 0.0) return {0.0, v, true};  // nilpotent-with-shift cannot happen; safety
    lambda_shifted = norm;                   // v is L1-normalized and nonnegative
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
      w[static_cast<std::size_t>(i)] /= norm;
      resid += std::abs(w[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(i)]);
    }
    v.swap(w);
    if (resid <= rel_tol) {
      converged = true;
      break;
    }
  }

  // Rayleigh-style refinement of the eigenvalue from the converged vector.
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a.at(i, j) * v[static_cast<std::size_t>(j)];
    num += s;
    den += v[static_cast<std::size_t>(i)];
  }
  const double lambda = den > 0.0 ? num / den : lambda_shifted - 1.0;
  return {lambda, v, converged};
}

}  // namespace gwldp
