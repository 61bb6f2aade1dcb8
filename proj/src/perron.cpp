#include "mfs/perron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mfs/error.hpp"

namespace mfs {

namespace {

constexpr double kTinyComponent = 1e-280;
constexpr double kFloorGap = 4e-16;
constexpr int kStallLimit = 25;
constexpr int kPowerPhase = 200;
constexpr int kInverseIterations = 60;
constexpr int kPolishSweeps = 100;
constexpr Eigen::Index kInverseMaxSize = 512;

// Collatz-Wielandt bracket of m at x over components that are not negligible.
std::pair<double, double> bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& mx) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > kTinyComponent) {
      const double r = mx[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  return {lo, hi};
}

struct Progress {
  double best_gap = std::numeric_limits<double>::infinity();
  int stalled = 0;
  bool met = false;

  // True when iteration should stop.
  bool update(double gap, double tolerance, int stall_limit) {
    if (gap <= tolerance) met = true;
    if (gap < best_gap * (1.0 - 1e-3)) {
      best_gap = gap;
      stalled = 0;
    } else {
      ++stalled;
    }
    return gap <= kFloorGap || (met && stalled >= stall_limit);
  }
};

PerronEigen iterate(const Eigen::MatrixXd& m, const PowerIterationOptions& options) {
  const Eigen::Index n = m.rows();
  if (n == 0 || m.cols() != n) {
    throw Error(ErrorKind::kNotSquare, "power iteration needs a nonempty square matrix");
  }
  if ((m.array() < 0.0).any()) {
    throw Error(ErrorKind::kInvalidArgument, "power iteration needs a nonnegative matrix");
  }

  const Eigen::VectorXd row_sums = m.rowwise().sum();
  const double max_row = row_sums.maxCoeff();
  PerronEigen out;
  out.vector = Eigen::VectorXd::Ones(n);
  if (max_row == 0.0) return out;

  double shift = options.shift >= 0.0 ? options.shift : row_sums.minCoeff();
  if (shift <= 0.0) shift = 1e-3 * max_row;

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd y(n);
  Progress progress;
  double estimate = 0.0;
  double upper = max_row;
  bool done = false;

  const auto power_steps = [&](int limit) {
    for (int it = 0; it < limit && !done; ++it) {
      y.noalias() = m * x;
      y += shift * x;
      const auto [lo, hi] = bracket(x, y);
      x = y / y.maxCoeff();
      out.iterations += 1;
      out.gap = (hi - lo) / hi;
      estimate = 0.5 * (lo + hi) - shift;
      upper = std::min(upper, hi - shift);
      done = progress.update(out.gap, options.tolerance, kStallLimit);
    }
  };

  const bool can_invert = n <= kInverseMaxSize;
  power_steps(can_invert ? std::min(kPowerPhase, options.max_iterations) : options.max_iterations);

  // Nearly coincident leading eigenvalues: inverse iteration just above the
  // current upper bound, where (mu I - M)^{-1} is nonnegative. Small
  // components come out with only absolute accuracy, so power steps resume
  // from the result to restore their relative accuracy.
  if (!done && can_invert) {
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
    double best_inverse_gap = std::numeric_limits<double>::infinity();
    int inverse_stalls = 0;
    for (int it = 0; it < kInverseIterations; ++it) {
      const double mu = upper * (1.0 + 1e-12) + 1e-300;
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(mu * identity - m);
      Eigen::VectorXd z = lu.solve(x).cwiseAbs();
      if (!z.allFinite() || !(z.maxCoeff() > 0.0)) break;
      x = z / z.maxCoeff();
      y.noalias() = m * x;
      const auto [lo, hi] = bracket(x, y);
      out.iterations += 1;
      upper = std::min(upper, hi);
      const double gap = hi > 0.0 ? (hi - lo) / hi : 0.0;
      if (gap <= kFloorGap) break;
      if (gap < best_inverse_gap * 0.5) {
        best_inverse_gap = gap;
        inverse_stalls = 0;
      } else if (++inverse_stalls >= 2) {
        break;
      }
    }
    // Gauss-Seidel sweeps on (lambda I - M) x = 0, lambda read off the
    // largest component: only sums of nonnegative terms, so small components
    // regain full relative accuracy.
    Eigen::VectorXd best_x = x;
    double best_gap = std::numeric_limits<double>::infinity();
    double previous_gap = std::numeric_limits<double>::infinity();
    int polish_stalls = 0;
    for (int sweep = 0; sweep < kPolishSweeps; ++sweep) {
      y.noalias() = m * x;
      const auto [lo, hi] = bracket(x, y);
      const double gap = hi > 0.0 ? (hi - lo) / hi : 0.0;
      if (gap < best_gap) {
        best_gap = gap;
        best_x = x;
      }
      polish_stalls = gap < 0.5 * previous_gap ? 0 : polish_stalls + 1;
      previous_gap = gap;
      if (gap <= kFloorGap || polish_stalls >= 5) break;
      Eigen::Index top = 0;
      x.maxCoeff(&top);
      const double lambda = y[top] / x[top];
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = lambda - m(i, i);
        if (i == top || !(d > 1e-14 * lambda)) continue;
        double sum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
          if (j != i) sum += m(i, j) * x[j];
        if (sum > 0.0) x[i] = sum / d;
      }
      x /= x.maxCoeff();
    }
    x = best_x;
    progress = Progress{};
    power_steps(std::max(options.max_iterations - out.iterations, 0));
  }

  if (!progress.met) {
    throw Error(ErrorKind::kNonConvergence,
                "power iteration did not reach relative tolerance (gap " + std::to_string(out.gap) + ")");
  }
  out.root = std::max(estimate, 0.0);
  out.vector = x;
  return out;
}

// Boolean reachability closure (Warshall).
std::vector<std::vector<bool>> reachability(const Eigen::MatrixXd& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = m(i, j) > 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

}  // namespace

PerronEigen perron_right(const Eigen::MatrixXd& matrix, const PowerIterationOptions& options) {
  return iterate(matrix, options);
}

PerronEigen perron_left(const Eigen::MatrixXd& matrix, const PowerIterationOptions& options) {
  return iterate(matrix.transpose(), options);
}

double spectral_radius(const Eigen::MatrixXd& matrix, const PowerIterationOptions& options) {
  const auto n = static_cast<std::size_t>(matrix.rows());
  const auto reach = reachability(matrix);
  std::vector<int> component(n, -1);
  double radius = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (component[v] >= 0 || !reach[v][v]) continue;
    std::vector<Eigen::Index> members;
    for (std::size_t u = 0; u < n; ++u) {
      if (reach[v][u] && reach[u][v]) {
        component[u] = static_cast<int>(v);
        members.push_back(static_cast<Eigen::Index>(u));
      }
    }
    Eigen::MatrixXd block(members.size(), members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = 0; j < members.size(); ++j) block(i, j) = matrix(members[i], members[j]);
    radius = std::max(radius, iterate(block, options).root);
  }
  return radius;
}

}  // namespace mfs
