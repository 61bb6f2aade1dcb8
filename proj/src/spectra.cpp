#include "mfs/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "mfs/error.hpp"
#include "mfs/parallel.hpp"
#include "mfs/perron.hpp"
#include "transfer.hpp"

namespace mfs {

namespace {

constexpr std::size_t kPressureGridSize = 2401;
constexpr int kGoldenIterations = 60;

using detail::TransferSystem;

// Extreme-mean structure of the block graph for weights sign * phi.
struct CriticalGraph {
  double mean = 0.0;              // max cycle mean of sign * phi
  std::vector<bool> critical;     // per edge
  PeriodicOrbit witness{Word{0}};
};

// reach[u][v]: v reachable from u by a nonempty path over the given edges.
std::vector<std::vector<char>> reachability(std::size_t n, const std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    stack.assign(out[s].begin(), out[s].end());
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (reach[s][v]) continue;
      reach[s][v] = 1;
      for (std::size_t w : out[v])
        if (!reach[s][w]) stack.push_back(w);
    }
  }
  return reach;
}

CriticalGraph critical_graph(const TransferSystem& system, double sign) {
  const auto& edges = system.edges();
  const std::size_t n = system.vertex_count();
  std::vector<double> weight(edges.size());
  double scale = 1.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    weight[e] = sign * system.edge_value(edges[e]);
    scale = std::max(scale, std::abs(weight[e]));
  }
  const detail::MaxMean mm = detail::max_mean_potentials(n, edges, weight);
  const double mean = mm.mean;
  const std::vector<double>& u = mm.potential;
  const double tight_tol = 1e-9 * scale;
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<bool> tight(edges.size(), false);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto from = static_cast<std::size_t>(edges[e].from);
    const auto to = static_cast<std::size_t>(edges[e].to);
    if (u[to] - u[from] - (weight[e] - mean) <= tight_tol) {
      tight[e] = true;
      out[from].push_back(to);
    }
  }
  const auto reach = reachability(n, out);
  CriticalGraph result;
  result.mean = mean;
  result.critical.assign(edges.size(), false);
  std::vector<std::optional<std::size_t>> first_out(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!tight[e]) continue;
    const auto from = static_cast<std::size_t>(edges[e].from);
    const auto to = static_cast<std::size_t>(edges[e].to);
    if (!reach[to][from]) continue;
    result.critical[e] = true;
    if (!first_out[from] || edges[e].to < edges[*first_out[from]].to) first_out[from] = e;
  }

  std::size_t start = n;
  for (std::size_t v = 0; v < n && start == n; ++v)
    if (first_out[v]) start = v;
  if (start == n) throw Error(ErrorKind::kNonConvergence, "critical graph has no cycle");
  std::vector<int> seen(n, -1);
  std::vector<std::size_t> walk;
  std::size_t v = start;
  while (seen[v] < 0) {
    seen[v] = static_cast<int>(walk.size());
    walk.push_back(v);
    v = static_cast<std::size_t>(edges[*first_out[v]].to);
  }
  Word word;
  for (std::size_t i = static_cast<std::size_t>(seen[v]); i < walk.size(); ++i) {
    word.push_back(system.states()->word(walk[i]).front());
  }
  result.witness = PeriodicOrbit(system.phi().sft(), std::move(word));
  return result;
}

double critical_entropy(const TransferSystem& system, const CriticalGraph& graph) {
  const auto n = static_cast<Eigen::Index>(system.vertex_count());
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
  const auto& edges = system.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (graph.critical[e]) adjacency(edges[e].from, edges[e].to) = 1.0;
  }
  const double root = spectral_radius(adjacency);
  return std::max(0.0, std::log(root));
}

void check_sft(const Sft& sft, const Potential& phi) {
  if (!(sft == phi.sft())) throw Error(ErrorKind::kSftMismatch, "potential is defined on a different SFT");
  if (!sft.primitive()) throw Error(ErrorKind::kNotPrimitive, "spectra need a primitive SFT");
}

double segment_distance(double px, double py, const SpectrumPoint& a, const SpectrumPoint& b) {
  const double dx = b.alpha - a.alpha;
  const double dy = b.entropy - a.entropy;
  const double len2 = dx * dx + dy * dy;
  double s = 0.0;
  if (len2 > 0.0) s = std::clamp(((px - a.alpha) * dx + (py - a.entropy) * dy) / len2, 0.0, 1.0);
  return std::hypot(px - (a.alpha + s * dx), py - (a.entropy + s * dy));
}

double polyline_distance(double px, double py, const SpectrumGraph& g) {
  const auto& p = g.points();
  if (p.size() == 1) return segment_distance(px, py, p[0], p[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < p.size(); ++j) best = std::min(best, segment_distance(px, py, p[j], p[j + 1]));
  return best;
}

// Upper bound on sup over the segment x0..x1 of the distance to g: for each
// segment of g the distance is convex along x0..x1, so its sup is attained
// at an end; the min over segments of these sups bounds the sup of the min.
double distance_upper_bound(double x0, double y0, double x1, double y1, const SpectrumGraph& g) {
  const auto& p = g.points();
  if (p.size() == 1) {
    return std::max(segment_distance(x0, y0, p[0], p[0]), segment_distance(x1, y1, p[0], p[0]));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    best = std::min(best, std::max(segment_distance(x0, y0, p[j], p[j + 1]), segment_distance(x1, y1, p[j], p[j + 1])));
  }
  return best;
}

}  // namespace

SpectrumGraph::SpectrumGraph(std::vector<SpectrumPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorKind::kEmptyGraph, "spectrum graph has no points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].alpha) || !std::isfinite(points_[i].entropy)) {
      throw Error(ErrorKind::kInvalidArgument, "spectrum graph entries must be finite");
    }
    if (i > 0 && !(points_[i].alpha > points_[i - 1].alpha)) {
      throw Error(ErrorKind::kInvalidArgument, "spectrum alphas must be strictly increasing");
    }
  }
}

const SpectrumPoint& SpectrumGraph::maximum() const {
  return *std::max_element(points_.begin(), points_.end(),
                           [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.entropy < b.entropy; });
}

bool SpectrumGraph::is_concave(double tolerance) const {
  for (std::size_t i = 1; i + 1 < points_.size(); ++i) {
    const auto& a = points_[i - 1];
    const auto& b = points_[i];
    const auto& c = points_[i + 1];
    const double w = (b.alpha - a.alpha) / (c.alpha - a.alpha);
    const double chord = (1.0 - w) * a.entropy + w * c.entropy;
    if (b.entropy < chord - tolerance) return false;
  }
  return true;
}

double SpectrumGraph::entropy_at(double alpha) const {
  const double slack = 1e-12 * (1.0 + std::abs(alpha_min()) + std::abs(alpha_max()));
  if (alpha < alpha_min() - slack || alpha > alpha_max() + slack) {
    throw Error(ErrorKind::kInvalidArgument, "alpha outside the spectrum domain");
  }
  if (points_.size() == 1 || alpha <= alpha_min()) return points_.front().entropy;
  if (alpha >= alpha_max()) return points_.back().entropy;
  const auto it = std::upper_bound(points_.begin(), points_.end(), alpha,
                                   [](double a, const SpectrumPoint& p) { return a < p.alpha; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
  return (1.0 - w) * lo.entropy + w * hi.entropy;
}

RotationInterval rotation_set(const Sft& sft, const Potential& phi) {
  check_sft(sft, phi);
  const TransferSystem system(phi);
  const CriticalGraph low = critical_graph(system, -1.0);
  const CriticalGraph high = critical_graph(system, 1.0);
  return RotationInterval{birkhoff_average(phi, low.witness), birkhoff_average(phi, high.witness), low.witness,
                          high.witness};
}

double critical_subgraph_entropy(const Sft& sft, const Potential& phi, Side side) {
  check_sft(sft, phi);
  const TransferSystem system(phi);
  return critical_entropy(system, critical_graph(system, side == Side::kMax ? 1.0 : -1.0));
}

struct SpectrumSolver::Impl {
  Impl(const Sft& sft, const Potential& phi, double t_max_in)
      : system(phi),
        rotation(rotation_set(sft, phi)),
        h_top(mfs::topological_entropy(sft)),
        t_max(t_max_in) {
    const auto eq0 = system.equilibrium(0.0);
    alpha0 = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) alpha0 += eq0.cylinder_masses[i] * phi.values()[i];
    const double a = rotation.alpha_min;
    const double b = rotation.alpha_max;
    degenerate = b - a <= 1e-12 * (1.0 + std::abs(a) + std::abs(b));
    if (degenerate) return;
    alpha0 = std::clamp(alpha0, a, b);
    entropy_min = critical_entropy(system, critical_graph(system, -1.0));
    entropy_max = critical_entropy(system, critical_graph(system, 1.0));

    t_grid.resize(kPressureGridSize);
    p_grid.resize(kPressureGridSize);
    for (std::size_t i = 0; i < kPressureGridSize; ++i) {
      t_grid[i] = -t_max + 2.0 * t_max * static_cast<double>(i) / static_cast<double>(kPressureGridSize - 1);
    }
    t_grid.back() = t_max;
    parallel_for(kPressureGridSize, [&](std::size_t i) { p_grid[i] = system.pressure(t_grid[i]); });

    // Where the duality minimizer reaches +-t_max.
    const auto slope_at = [&](double t) {
      const auto eq = system.equilibrium(t);
      double s = 0.0;
      for (std::size_t i = 0; i < phi.size(); ++i) s += eq.cylinder_masses[i] * phi.values()[i];
      return s;
    };
    boundary_low_alpha = std::clamp(slope_at(-t_max), a, b);
    boundary_high_alpha = std::clamp(slope_at(t_max), a, b);
    boundary_low_entropy = p_grid.front() + t_max * boundary_low_alpha;
    boundary_high_entropy = p_grid.back() - t_max * boundary_high_alpha;
  }

  double interior(double alpha) const {
    std::size_t best = 0;
    double best_value = p_grid[0] - t_grid[0] * alpha;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
      const double v = p_grid[i] - t_grid[i] * alpha;
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    const std::size_t centre = std::clamp<std::size_t>(best, 1, t_grid.size() - 2);
    double lo = t_grid[centre - 1];
    double hi = t_grid[centre + 1];
    const auto f = [&](double t) { return system.pressure(t) - t * alpha; };
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < kGoldenIterations && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = f(x2);
      }
    }
    return std::min({best_value, f1, f2});
  }

  double value(double alpha) const {
    const double a = rotation.alpha_min;
    const double b = rotation.alpha_max;
    const double slack = 1e-12 * (1.0 + std::abs(a) + std::abs(b));
    if (alpha < a - slack || alpha > b + slack) {
      throw Error(ErrorKind::kInvalidArgument, "alpha outside the rotation set");
    }
    if (degenerate) return h_top;
    if (alpha <= a) return entropy_min;
    if (alpha >= b) return entropy_max;
    if (alpha < boundary_low_alpha) {
      const double w = (alpha - a) / (boundary_low_alpha - a);
      return (1.0 - w) * entropy_min + w * boundary_low_entropy;
    }
    if (alpha > boundary_high_alpha) {
      const double w = (b - alpha) / (b - boundary_high_alpha);
      return (1.0 - w) * entropy_max + w * boundary_high_entropy;
    }
    return std::clamp(interior(alpha), 0.0, h_top);
  }

  TransferSystem system;
  RotationInterval rotation;
  double h_top;
  double t_max;
  double alpha0 = 0.0;
  bool degenerate = false;
  double entropy_min = 0.0;
  double entropy_max = 0.0;
  std::vector<double> t_grid;
  std::vector<double> p_grid;
  double boundary_low_alpha = 0.0;
  double boundary_high_alpha = 0.0;
  double boundary_low_entropy = 0.0;
  double boundary_high_entropy = 0.0;
};

SpectrumSolver::SpectrumSolver(const Sft& sft, const Potential& phi, double t_max) {
  check_sft(sft, phi);
  if (!(t_max > 0.0)) throw Error(ErrorKind::kInvalidArgument, "t_max must be positive");
  impl_ = std::make_unique<Impl>(sft, phi, t_max);
}

SpectrumSolver::~SpectrumSolver() = default;
SpectrumSolver::SpectrumSolver(SpectrumSolver&&) noexcept = default;
SpectrumSolver& SpectrumSolver::operator=(SpectrumSolver&&) noexcept = default;

const RotationInterval& SpectrumSolver::rotation() const { return impl_->rotation; }
double SpectrumSolver::topological_entropy() const { return impl_->h_top; }
double SpectrumSolver::max_entropy_alpha() const { return impl_->alpha0; }
bool SpectrumSolver::degenerate() const { return impl_->degenerate; }
double SpectrumSolver::value(double alpha) const { return impl_->value(alpha); }

std::vector<double> SpectrumSolver::values(std::span<const double> alphas) const {
  std::vector<double> out(alphas.size());
  parallel_for(alphas.size(), [&](std::size_t i) { out[i] = impl_->value(alphas[i]); });
  return out;
}

SpectrumGraph SpectrumSolver::graph(std::size_t n_alpha) const {
  if (n_alpha < 3) throw Error(ErrorKind::kInvalidArgument, "n_alpha must be at least 3");
  const double a = impl_->rotation.alpha_min;
  const double b = impl_->rotation.alpha_max;
  if (impl_->degenerate) return SpectrumGraph({{a, impl_->h_top}});
  std::vector<double> alphas(n_alpha);
  for (std::size_t i = 0; i < n_alpha; ++i) {
    alphas[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n_alpha - 1);
  }
  alphas.back() = b;
  const double a0 = impl_->alpha0;
  const auto pos = std::lower_bound(alphas.begin(), alphas.end(), a0);
  const double cell = (b - a) / static_cast<double>(n_alpha - 1);
  const bool near_existing = (pos != alphas.end() && *pos - a0 <= 1e-9 * cell) ||
                             (pos != alphas.begin() && a0 - *(pos - 1) <= 1e-9 * cell);
  if (!near_existing) alphas.insert(pos, a0);
  const auto entropies = values(alphas);
  std::vector<SpectrumPoint> points(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) points[i] = {alphas[i], entropies[i]};
  return SpectrumGraph(std::move(points));
}

SpectrumGraph entropy_spectrum(const Sft& sft, const Potential& phi, std::size_t n_alpha, double t_max) {
  if (n_alpha < 3) throw Error(ErrorKind::kInvalidArgument, "n_alpha must be at least 3");
  return SpectrumSolver(sft, phi, t_max).graph(n_alpha);
}

double distance_to_graph(const SpectrumPoint& p, const SpectrumGraph& g) {
  return polyline_distance(p.alpha, p.entropy, g);
}

double one_sided_excess(const SpectrumGraph& a, const SpectrumGraph& b) {
  const auto& pa = a.points();
  double best = 0.0;
  for (const auto& p : pa) best = std::max(best, distance_to_graph(p, b));
  struct Interval {
    double s0, s1;
    int depth;
  };
  constexpr double kResolution = 1e-14;
  std::vector<Interval> stack;
  for (std::size_t j = 0; j + 1 < pa.size(); ++j) {
    const auto& p = pa[j];
    const auto& q = pa[j + 1];
    const auto at = [&](double s) {
      return std::pair{p.alpha + s * (q.alpha - p.alpha), p.entropy + s * (q.entropy - p.entropy)};
    };
    stack.assign(1, {0.0, 1.0, 0});
    while (!stack.empty()) {
      const Interval iv = stack.back();
      stack.pop_back();
      const auto [x0, y0] = at(iv.s0);
      const auto [x1, y1] = at(iv.s1);
      if (distance_upper_bound(x0, y0, x1, y1, b) <= best + kResolution || iv.depth >= 60) continue;
      const double mid = 0.5 * (iv.s0 + iv.s1);
      const auto [xm, ym] = at(mid);
      best = std::max(best, polyline_distance(xm, ym, b));
      stack.push_back({iv.s0, mid, iv.depth + 1});
      stack.push_back({mid, iv.s1, iv.depth + 1});
    }
  }
  return best;
}

double spectrum_distance(const SpectrumGraph& a, const SpectrumGraph& b) {
  return std::max(one_sided_excess(a, b), one_sided_excess(b, a));
}

UscDemoReport usc_failure_demo(const Sft& sft, const std::vector<double>& t_list, std::size_t n_alpha) {
  if (!(sft == full_shift(2))) throw Error(ErrorKind::kInvalidArgument, "the semicontinuity demo runs on the full 2-shift");
  for (double t : t_list) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "demo parameters must lie in [0, 1]");
  }
  const Potential phi = Potential::from_function(sft, 2, [](std::span<const Symbol> w) {
    return (w[0] == 1 && w[1] == 1) ? -1.0 : 0.0;
  });
  const Potential psi = Potential::from_function(sft, 1, [](std::span<const Symbol> w) {
    return w[0] == 1 ? -1.0 : 0.0;
  });
  SpectrumGraph base = entropy_spectrum(sft, phi, n_alpha);
  const double delta = distance_to_graph({0.0, 0.0}, base);

  std::vector<UscDemoRow> rows;
  rows.reserve(t_list.size());
  for (double t : t_list) {
    SpectrumGraph g = t == 0.0 ? base : entropy_spectrum(sft, affine_combine(phi, psi, t), n_alpha);
    const double upper = one_sided_excess(g, base);
    const double lower = one_sided_excess(base, g);
    rows.push_back(UscDemoRow{t, upper, lower, delta, std::move(g)});
  }

  bool certified = true;
  for (const auto& row : rows)
    if (row.t > 0.0 && row.excess_upper < delta - 1e-6) certified = false;
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return rows[i].t > rows[j].t; });
  bool trend = true;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (rows[order[i]].excess_lower > rows[order[i - 1]].excess_lower + 1e-6) trend = false;
  }
  if (order.size() >= 2 && !(rows[order.back()].excess_lower < rows[order.front()].excess_lower)) trend = false;
  return UscDemoReport{std::move(base), delta, std::move(rows), certified, trend};
}

}  // namespace mfs
