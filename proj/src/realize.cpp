#include "mfs/realize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "mfs/error.hpp"
#include "mfs/oracle.hpp"
#include "mfs/parallel.hpp"
#include "mfs/rng.hpp"
#include "transfer.hpp"

namespace mfs {

namespace {

constexpr int kWitnessPeriod = 12;
constexpr double kWitnessSeparation = 1e-6;
constexpr double kSiteMass = 1e-8;
constexpr int kExtraSeeds = 24;

struct Problem {
  Potential base;  // supplies the SFT, depth and word index
  std::vector<double> t;
  std::vector<double> target;
  double beta;
  int max_iterations;
  double stop_error;
};

struct Run {
  std::vector<double> values;
  double sup_error = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::vector<double> history;
  std::vector<double> max_mass;  // per word, over t
};

// (1/beta) log((1/2m) sum_i (e^{beta r_i} + e^{-beta r_i})), which is 0 at r = 0.
double smoothed_objective(const std::vector<double>& r, double beta) {
  const auto m = static_cast<double>(r.size());
  double top = 0.0;
  for (double x : r) top = std::max(top, beta * std::abs(x));
  if (top <= 300.0) {
    double s = 0.0;
    for (double x : r) {
      const double h = std::sinh(0.5 * beta * x);
      s += 2.0 * h * h;
    }
    return std::log1p(s / m) / beta;
  }
  double s = 0.0;
  for (double x : r) s += std::exp(beta * x - top) + std::exp(-beta * x - top);
  return (top + std::log(s) - std::log(2.0 * m)) / beta;
}

std::vector<double> residuals(const Problem& p, const std::vector<double>& values) {
  const detail::TransferSystem system(p.base.with_values(values));
  std::vector<double> r(p.t.size());
  for (std::size_t i = 0; i < p.t.size(); ++i) r[i] = system.pressure(p.t[i]) - p.target[i];
  return r;
}

double sup_abs(const std::vector<double>& r) {
  double s = 0.0;
  for (double x : r) s = std::max(s, std::abs(x));
  return s;
}

Run optimize(const Problem& p, std::vector<double> values) {
  const std::size_t n = values.size();
  const std::size_t m = p.t.size();
  Run run;
  run.max_mass.assign(n, 0.0);
  std::vector<double> best_values = values;
  double best_sup = std::numeric_limits<double>::infinity();
  std::vector<double> masses_at_best(n, 0.0);

  for (int iter = 0;; ++iter) {
    const detail::TransferSystem system(p.base.with_values(values));
    std::vector<double> r(m);
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    std::vector<double> max_mass(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto eq = system.equilibrium(p.t[i]);
      r[i] = eq.pressure - p.target[i];
      for (std::size_t w = 0; w < n; ++w) {
        jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(w)) = p.t[i] * eq.cylinder_masses[w];
        max_mass[w] = std::max(max_mass[w], eq.cylinder_masses[w]);
      }
    }
    const double sup = sup_abs(r);
    const double objective = smoothed_objective(r, p.beta);
    if (iter == 0) run.history.push_back(objective);
    if (sup < best_sup) {
      best_sup = sup;
      best_values = values;
      masses_at_best = max_mass;
    }
    run.iterations = iter;
    if (sup <= p.stop_error || iter >= p.max_iterations) break;

    double top = 0.0;
    for (double x : r) top = std::max(top, p.beta * std::abs(x));
    Eigen::VectorXd plus(static_cast<Eigen::Index>(m));
    Eigen::VectorXd minus(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      plus[static_cast<Eigen::Index>(i)] = std::exp(p.beta * r[i] - top);
      minus[static_cast<Eigen::Index>(i)] = std::exp(-p.beta * r[i] - top);
    }
    const double z = plus.sum() + minus.sum();
    plus /= z;
    minus /= z;
    const Eigen::VectorXd grad = jac.transpose() * (plus - minus);
    Eigen::VectorXd weight(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      weight[k] = (plus[k] + minus[k]) / std::max(std::abs(r[i]), 1.0 / p.beta);
    }
    Eigen::MatrixXd normal = jac.transpose() * weight.asDiagonal() * jac;
    const double ridge = 1e-10 * std::max(normal.trace() / static_cast<double>(n), 1e-300);
    normal.diagonal().array() += ridge;
    Eigen::VectorXd dir = -normal.ldlt().solve(grad);
    double slope = grad.dot(dir);
    if (!std::isfinite(slope) || slope >= 0.0) {
      dir = -grad;
      slope = -grad.squaredNorm();
    }
    if (!(slope < 0.0)) break;

    bool accepted = false;
    double step = 1.0;
    for (int k = 0; k < 50; ++k, step *= 0.5) {
      std::vector<double> trial(n);
      for (std::size_t w = 0; w < n; ++w) trial[w] = values[w] + step * dir[static_cast<Eigen::Index>(w)];
      const double trial_objective = smoothed_objective(residuals(p, trial), p.beta);
      if (trial_objective <= objective + 1e-4 * step * slope) {
        values = std::move(trial);
        run.history.push_back(trial_objective);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  run.values = std::move(best_values);
  run.sup_error = best_sup;
  run.max_mass = std::move(masses_at_best);
  return run;
}

std::vector<double> start_values(const Problem& p, int index, std::uint64_t seed, double lo, double hi) {
  std::vector<double> v(p.base.size(), 0.0);
  if (index == 0) return v;
  CounterRng rng(seed, static_cast<std::uint64_t>(index));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

struct Setup {
  Problem problem;
  double slope_lo;
  double slope_hi;
};

Setup make_setup(const Sft& sft, int depth, const RealizeOptions& options, std::vector<double> t,
                 std::vector<double> target, double slope_lo, double slope_hi) {
  if (depth < 1) throw Error(ErrorKind::kInvalidArgument, "depth must be at least 1");
  if (!sft.primitive()) throw Error(ErrorKind::kNotPrimitive, "realization needs a primitive SFT");
  if (options.starts < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one start");
  Problem p{Potential::constant(sft, depth, 0.0), std::move(t), std::move(target), options.sharpness,
            options.max_iterations, options.stop_error};
  return Setup{std::move(p), slope_lo, slope_hi};
}

// Runs all starts (plus the warm start) and returns them in start order; the
// warm start, if any, comes last.
std::vector<Run> run_starts(const Setup& setup, const RealizeOptions& options) {
  const auto starts = static_cast<std::size_t>(options.starts);
  const std::size_t total = starts + (options.warm_start ? 1 : 0);
  std::vector<Run> runs(total);
  parallel_for(total, [&](std::size_t i) {
    std::vector<double> init;
    if (i < starts) {
      init = start_values(setup.problem, static_cast<int>(i), options.seed, setup.slope_lo, setup.slope_hi);
    } else {
      const Potential& w = *options.warm_start;
      if (!(w.sft() == setup.problem.base.sft()) || w.depth() > setup.problem.base.depth()) {
        throw Error(ErrorKind::kInvalidArgument, "warm start must live on the same SFT at depth <= k");
      }
      init = w.lifted(setup.problem.base.depth()).values();
    }
    runs[i] = optimize(setup.problem, std::move(init));
  });
  return runs;
}

RealizationResult to_result(const Setup& setup, const Run& run, int start_index, double tol) {
  RealizationResult result{setup.problem.base.with_values(run.values), run.sup_error, run.sup_error,
                           run.iterations, run.sup_error <= tol, start_index, run.history, std::nullopt,
                           std::nullopt};
  return result;
}

int start_label(std::size_t i, const RealizeOptions& options) {
  return i < static_cast<std::size_t>(options.starts) ? static_cast<int>(i) : -1;
}

double interpolate_checked(const GridFunction& f, double t) {
  const double slack = 1e-12 * std::max(1.0, f.back() - f.front());
  if (t < f.front() - slack || t > f.back() + slack) {
    throw Error(ErrorKind::kInvalidArgument, "evaluation point outside the grid of F");
  }
  return f(std::clamp(t, f.front(), f.back()));
}

void check_pressure_hypotheses(const Sft& sft, const GridFunction& f, double tol) {
  if (f.size() < 5) throw Error(ErrorKind::kInvalidArgument, "F needs at least five grid points");
  const auto& v = f.values();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) worst = std::min(worst, v[i - 1] - 2.0 * v[i] + v[i + 1]);
  if (worst < -1e-9) throw HypothesisViolation("convexity", -worst, 1e-9);

  const double h_top = topological_entropy(sft);
  const double f0 = interpolate_checked(f, 0.0);
  if (std::abs(f0 - h_top) > tol) throw HypothesisViolation("F(0) equals topological entropy", std::abs(f0 - h_top), tol);

  const auto [lo, hi] = supporting_intercepts(f);
  (void)hi;
  if (lo < -tol) throw HypothesisViolation("nonnegative supporting-line intercepts", -lo, tol);

  const double d = f.spacing();
  const auto i0 = static_cast<std::size_t>(std::lround((0.0 - f.front()) / d));
  if (i0 < 2 || i0 + 2 >= f.size()) return;
  const double right = (-3.0 * v[i0] + 4.0 * v[i0 + 1] - v[i0 + 2]) / (2.0 * d);
  const double left = (3.0 * v[i0] - 4.0 * v[i0 - 1] + v[i0 - 2]) / (2.0 * d);
  double third = 0.0;
  if (i0 + 3 < f.size()) third = std::max(third, std::abs(v[i0 + 3] - 3.0 * v[i0 + 2] + 3.0 * v[i0 + 1] - v[i0]) / (d * d * d));
  if (i0 >= 3) third = std::max(third, std::abs(v[i0] - 3.0 * v[i0 - 1] + 3.0 * v[i0 - 2] - v[i0 - 3]) / (d * d * d));
  const double threshold = tol + 2.0 * d * d / 3.0 * third;
  if (std::abs(right - left) > threshold) {
    throw HypothesisViolation("differentiable at the origin", std::abs(right - left), threshold);
  }
}

SpectrumGraph target_graph(const CmsFunction& h) {
  std::vector<SpectrumPoint> pts(h.base.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {h.base.x()[i], h.base.values()[i]};
  return SpectrumGraph(std::move(pts));
}

struct SpectrumSetup {
  Setup setup;
  SpectrumGraph target;
  std::size_t points;
};

SpectrumSetup make_spectrum_setup(const Sft& sft, const CmsFunction& h, int depth, double tol,
                                  const RealizeOptions& options) {
  const double h_top = topological_entropy(sft);
  if (std::abs(h.max_value - h_top) > tol) {
    std::ostringstream msg;
    msg << "spectrum maximum " << h.max_value << " differs from topological entropy " << h_top;
    throw Error(ErrorKind::kMaxEntropyMismatch, msg.str());
  }
  std::vector<double> t = options.t_eval.empty() ? default_t_eval() : options.t_eval;
  std::vector<double> target(t.size());
  const auto& alpha = h.base.x();
  if (h.base.is_point()) {
    for (std::size_t i = 0; i < t.size(); ++i) target[i] = h.base.values()[0] + t[i] * alpha[0];
  } else {
    std::vector<double> negated(h.base.values());
    for (auto& x : negated) x = -x;
    const GridFunction minus_h(alpha, std::move(negated));
    target = conjugate_values(minus_h, t);
  }
  const std::size_t points = options.spectrum_points ? options.spectrum_points : std::max<std::size_t>(h.base.size(), 3);
  return SpectrumSetup{make_setup(sft, depth, options, std::move(t), std::move(target), alpha.front(), alpha.back()),
                       target_graph(h), points};
}

void attach_spectrum(const Sft& sft, RealizationResult& result, const SpectrumGraph& target, std::size_t points,
                     double tol) {
  SpectrumSolver solver(sft, result.potential);
  result.rotation = solver.rotation();
  result.spectrum = solver.graph(points);
  result.target_error = spectrum_distance(*result.spectrum, target);
  result.converged = result.target_error <= tol;
}

}  // namespace

std::vector<double> default_t_eval() {
  constexpr int kCount = 41;
  constexpr double kHalfWidth = 20.0;
  std::vector<double> t(kCount);
  for (int j = 0; j < kCount; ++j) {
    const double c = std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * kCount));
    t[static_cast<std::size_t>(j)] = std::abs(c) < 1e-15 ? 0.0 : -kHalfWidth * c;
  }
  return t;
}

RealizationResult realize_pressure(const Sft& sft, const GridFunction& f, int depth, double tol,
                                   const RealizeOptions& options) {
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tolerance must be positive");
  if (f.is_point()) throw Error(ErrorKind::kInvalidArgument, "F must be sampled on a grid");
  check_pressure_hypotheses(sft, f, tol);
  std::vector<double> t = options.t_eval.empty() ? default_t_eval() : options.t_eval;
  std::vector<double> target(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) target[i] = interpolate_checked(f, t[i]);
  const auto& v = f.values();
  const double d = f.spacing();
  const double lo = (v[1] - v[0]) / d;
  const double hi = (v[v.size() - 1] - v[v.size() - 2]) / d;
  const Setup setup = make_setup(sft, depth, options, std::move(t), std::move(target), lo, hi);
  const auto runs = run_starts(setup, options);
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].sup_error < runs[best].sup_error) best = i;
  RealizationResult result = to_result(setup, runs[best], start_label(best, options), tol);
  result.rotation = rotation_set(sft, result.potential);
  return result;
}

RealizationResult realize_spectrum(const Sft& sft, const CmsFunction& h, int depth, double tol,
                                   const RealizeOptions& options) {
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tolerance must be positive");
  const SpectrumSetup s = make_spectrum_setup(sft, h, depth, tol, options);
  const auto runs = run_starts(s.setup, options);
  std::vector<RealizationResult> results;
  results.reserve(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    results.push_back(to_result(s.setup, runs[i], start_label(i, options), tol));
  }
  parallel_for(results.size(), [&](std::size_t i) { attach_spectrum(sft, results[i], s.target, s.points, tol); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].target_error < results[best].target_error) best = i;
  return std::move(results[best]);
}

std::optional<CohomologyWitness> cohomology_witness(const Potential& phi, const Potential& psi, int max_period) {
  if (!(phi.sft() == psi.sft())) throw Error(ErrorKind::kSftMismatch, "potentials live on different SFTs");
  const int depth = std::max(phi.depth(), psi.depth());
  const Potential a = phi.lifted(depth);
  const Potential b = psi.lifted(depth);
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.values()[i] - b.values()[i];
  const Potential d = a.with_values(std::move(diff));
  const OrbitCatalog catalog = enumerate_orbits(phi.sft(), max_period);
  std::optional<PeriodicOrbit> low;
  std::optional<PeriodicOrbit> high;
  double low_avg = std::numeric_limits<double>::infinity();
  double high_avg = -std::numeric_limits<double>::infinity();
  for (const auto& group : catalog.by_period) {
    for (const auto& orbit : group) {
      const double avg = birkhoff_average(d, orbit);
      if (avg < low_avg) {
        low_avg = avg;
        low = orbit;
      }
      if (avg > high_avg) {
        high_avg = avg;
        high = orbit;
      }
    }
  }
  if (!low || !(high_avg - low_avg > kWitnessSeparation)) return std::nullopt;
  return CohomologyWitness{*low, *high, low_avg, high_avg};
}

ManyRealization realize_many(const Sft& sft, const CmsFunction& h, int depth, int n, double tol,
                             const RealizeOptions& options) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one realization");
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tolerance must be positive");
  const SpectrumSetup s = make_spectrum_setup(sft, h, depth, tol, options);
  const Problem& problem = s.setup.problem;

  ManyRealization out;
  std::vector<RealizationResult> spare;
  const auto separated = [&](const Potential& candidate) {
    for (const auto& kept : out.results) {
      if (!cohomology_witness(kept.potential, candidate, kWitnessPeriod)) return false;
    }
    return true;
  };
  for (int index = 0; index < n + kExtraSeeds && static_cast<int>(out.results.size()) < n; ++index) {
    const Run run = optimize(problem, start_values(problem, index, options.seed, s.setup.slope_lo, s.setup.slope_hi));
    RealizationResult candidate = to_result(s.setup, run, index, tol);
    attach_spectrum(sft, candidate, s.target, s.points, tol);
    if (!candidate.converged) continue;
    if (separated(candidate.potential)) {
      out.results.push_back(std::move(candidate));
      continue;
    }
    std::vector<double> values = candidate.potential.values();
    bool has_site = false;
    for (std::size_t w = 0; w < values.size(); ++w) {
      if (run.max_mass[w] < kSiteMass) {
        values[w] += 1.0;
        has_site = true;
      }
    }
    if (has_site) {
      RealizationResult perturbed = candidate;
      perturbed.potential = candidate.potential.with_values(std::move(values));
      attach_spectrum(sft, perturbed, s.target, s.points, tol);
      if (perturbed.converged && separated(perturbed.potential)) {
        out.results.push_back(std::move(perturbed));
        continue;
      }
    }
    spare.push_back(std::move(candidate));
  }
  for (auto& r : spare) {
    if (static_cast<int>(out.results.size()) >= n) break;
    out.results.push_back(std::move(r));
  }
  for (int i = 0; i < static_cast<int>(out.results.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(out.results.size()); ++j) {
      auto w = cohomology_witness(out.results[static_cast<std::size_t>(i)].potential,
                                  out.results[static_cast<std::size_t>(j)].potential, kWitnessPeriod);
      if (!w) ++out.unresolved;
      out.pairs.push_back(PairWitness{i, j, std::move(w)});
    }
  }
  return out;
}

}  // namespace mfs
