#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gwldp {

/// Small dense row-major matrix; all linear algebra here is desk scale.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rr) {
    if (rr.empty()) throw std::invalid_argument("matrix: empty");
    Matrix m(static_cast<int>(rr.size()), static_cast<int>(rr[0].size()));
    for (int i = 0; i < m.rows; ++i) {
      if (static_cast<int>(rr[static_cast<std::size_t>(i)].size()) != m.cols)
        throw std::invalid_argument("matrix: ragged rows");
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = rr[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
  }

  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  bool operator==(const Matrix&) const = default;
};

/// Dominant eigenpair of a nonnegative matrix by power iteration.
struct PowerResult {
  double eigenvalue;
  std::vector<double> eigenvector;  // L1-normalized, nonnegative
  bool converged;
};

/**
 * Power iteration with a +I shift so that periodic nonnegative matrices
 * (where plain iteration oscillates) still converge: for nonnegative A the
 * shift is spectrum-preserving, rho(A+I) = rho(A) + 1 with the same
 * eigenvectors. Convergence test is the L1 residual relative to the
 * eigenvalue estimate.
 */
PowerResult power_iteration(const Matrix& a, double rel_tol = 1e-12, int max_iter = 100000);

}  // namespace gwldp
