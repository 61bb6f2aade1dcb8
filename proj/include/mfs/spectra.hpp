#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "mfs/potential.hpp"
#include "mfs/sft.hpp"

namespace mfs {

struct SpectrumPoint {
  double alpha = 0.0;
  double entropy = 0.0;
};

/// Sampled graph of an entropy spectrum, read as the polyline through its
/// points. Concavity is not enforced so raw estimates fit the same type.
class SpectrumGraph {
 public:
  /// Throws kEmptyGraph for no points, kInvalidArgument unless alphas are
  /// strictly increasing and all entries finite.
  explicit SpectrumGraph(std::vector<SpectrumPoint> points);

  const std::vector<SpectrumPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const SpectrumPoint& operator[](std::size_t i) const { return points_[i]; }
  double alpha_min() const { return points_.front().alpha; }
  double alpha_max() const { return points_.back().alpha; }
  /// Point with the largest entropy (lowest index on ties).
  const SpectrumPoint& maximum() const;
  /// Every sample lies on or above each chord of its neighbours within tolerance.
  bool is_concave(double tolerance = 1e-9) const;
  /// Linear interpolation; throws kInvalidArgument outside [alpha_min, alpha_max].
  double entropy_at(double alpha) const;

 private:
  std::vector<SpectrumPoint> points_;
};

struct RotationInterval {
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  PeriodicOrbit argmin_cycle;
  PeriodicOrbit argmax_cycle;
};

enum class Side { kMin, kMax };

/// Extreme cycle means of phi on its block graph (Karp). The bounds are the
/// Birkhoff averages of the returned witness orbits. Throws kNotPrimitive.
RotationInterval rotation_set(const Sft& sft, const Potential& phi);

/// Topological entropy of the union of cycles attaining the extreme mean on
/// the given side: the spectrum value at that end of the rotation set.
double critical_subgraph_entropy(const Sft& sft, const Potential& phi, Side side);

/// Entropy spectrum evaluator: E(alpha) = inf_{|t| <= t_max} P(t phi) - t alpha
/// in the interior, critical-graph values at the ends.
class SpectrumSolver {
 public:
  static constexpr double kDefaultTMax = 60.0;

  SpectrumSolver(const Sft& sft, const Potential& phi, double t_max = kDefaultTMax);
  ~SpectrumSolver();
  SpectrumSolver(SpectrumSolver&&) noexcept;
  SpectrumSolver& operator=(SpectrumSolver&&) noexcept;

  const RotationInterval& rotation() const;
  double topological_entropy() const;
  /// Integral of phi against the measure of maximal entropy.
  double max_entropy_alpha() const;
  bool degenerate() const;
  /// Throws kInvalidArgument outside the rotation set.
  double value(double alpha) const;
  std::vector<double> values(std::span<const double> alphas) const;
  /// n_alpha uniform samples of the rotation set plus the point of maximal
  /// entropy; a single point for constant-average potentials.
  SpectrumGraph graph(std::size_t n_alpha) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Throws kNotPrimitive, or kInvalidArgument for n_alpha < 3 or t_max <= 0.
SpectrumGraph entropy_spectrum(const Sft& sft, const Potential& phi, std::size_t n_alpha,
                               double t_max = SpectrumSolver::kDefaultTMax);

/// Euclidean distance from (alpha, entropy) to the polyline of g.
double distance_to_graph(const SpectrumPoint& p, const SpectrumGraph& g);

/// e(A, B) = sup over the polyline of a of the distance to the polyline of b.
double one_sided_excess(const SpectrumGraph& a, const SpectrumGraph& b);

/// Hausdorff distance between the two polylines.
double spectrum_distance(const SpectrumGraph& a, const SpectrumGraph& b);

struct UscDemoRow {
  double t = 0.0;
  double excess_upper = 0.0;  // e(graph of phi_t, graph of phi)
  double excess_lower = 0.0;  // e(graph of phi, graph of phi_t)
  double delta = 0.0;
  SpectrumGraph graph;
};

struct UscDemoReport {
  SpectrumGraph base_graph;
  double delta = 0.0;  // distance from (0, 0) to the base graph
  std::vector<UscDemoRow> rows;
  bool certified = false;   // excess_upper >= delta - 1e-6 for every t > 0
  bool lsc_trend = false;   // excess_lower decreases as t decreases
};

/// Perturbs phi = -1[x0 x1 = 11] towards psi = -1[x0 = 1] on the full
/// 2-shift: phi_t = (1 - t) phi + t psi. Throws kInvalidArgument for any other
/// SFT or for t outside [0, 1].
UscDemoReport usc_failure_demo(const Sft& sft, const std::vector<double>& t_list, std::size_t n_alpha = 401);

}  // namespace mfs
