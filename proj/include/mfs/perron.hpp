#pragma once

#include <Eigen/Dense>

namespace mfs {

struct PowerIterationOptions {
  double tolerance = 1e-12;  // relative Collatz-Wielandt gap required for success
  int max_iterations = 100000;
  double shift = -1.0;  // added to the diagonal; negative: the minimum row sum
};

struct PerronEigen {
  double root = 0.0;
  Eigen::VectorXd vector;  // positive, max-normalized
  int iterations = 0;
  double gap = 0.0;  // final relative Collatz-Wielandt bracket width
};

/// Perron root and right eigenvector of a nonnegative matrix by shifted power
/// iteration from the all-ones vector. The shift (minimum row sum) leaves the
/// eigenvectors unchanged and makes irreducible periodic matrices converge.
/// Convergence is certified by the Collatz-Wielandt bracket
/// min_i (Mx)_i/x_i <= root <= max_i (Mx)_i/x_i; once the bracket is below
/// the tolerance the iteration keeps going while it still tightens. Slow
/// cases (up to 512 rows) switch to inverse iteration and Gauss-Seidel
/// sweeps on (root I - M) x = 0 before resuming power steps.
/// Throws kNonConvergence if the tolerance is not met.
PerronEigen perron_right(const Eigen::MatrixXd& matrix, const PowerIterationOptions& options = {});

/// Left eigenvector (row vector stored as a column) for the same root.
PerronEigen perron_left(const Eigen::MatrixXd& matrix, const PowerIterationOptions& options = {});

/// Spectral radius of an arbitrary nonnegative matrix, taken as the maximum
/// over its strongly connected components (zero if there are no cycles).
double spectral_radius(const Eigen::MatrixXd& matrix, const PowerIterationOptions& options = {});

}  // namespace mfs
