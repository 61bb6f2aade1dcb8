#include "mfs/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mfs/error.hpp"
#include "mfs/parallel.hpp"
#include "mfs/spectra.hpp"
#include "mfs/thermo.hpp"
#include "transfer.hpp"

namespace mfs {

namespace {

constexpr double kSCap = 1e6;
constexpr double kSlackFloor = -1e-9;
constexpr double kStrictGap = 1e-12;
constexpr double kPositiveEntropy = 1e-9;

PathSample equilibrium_sample(const detail::TransferSystem& system, double t, double s) {
  auto eq = system.equilibrium(s);
  PathSample sample;
  sample.t = t;
  sample.s = s;
  sample.pressure = eq.pressure;
  const auto& values = system.phi().values();
  sample.integral = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sample.integral += eq.cylinder_masses[i] * values[i];
  sample.cylinder_masses = eq.cylinder_masses;
  sample.entropy = measure_entropy(system.measure(std::move(eq)));
  return sample;
}

PathSample orbit_sample(const Potential& phi, const PeriodicOrbit& orbit, double t, double s) {
  PathSample sample;
  sample.t = t;
  sample.s = s;
  sample.entropy = 0.0;
  sample.integral = birkhoff_average(phi, orbit);
  sample.pressure = s * sample.integral;
  sample.cylinder_masses.assign(phi.size(), 0.0);
  const int k = phi.depth();
  const double weight = 1.0 / static_cast<double>(orbit.period());
  for (int shift = 0; shift < orbit.period(); ++shift) {
    const Word w = orbit.prefix(shift, k);
    sample.cylinder_masses[static_cast<std::size_t>(phi.index_of(w))] += weight;
  }
  return sample;
}

void record(ClaimResult& claim, double slack, int index) {
  if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
  if (slack < claim.worst_slack) {
    claim.worst_slack = slack;
    claim.witness_index = index;
  }
}

}  // namespace

Path single_sided_path(const Sft& sft, const PeriodicOrbit& orbit, int depth, const std::vector<double>& s_grid) {
  if (!std::is_sorted(s_grid.begin(), s_grid.end())) {
    throw Error(ErrorKind::kInvalidArgument, "s grid must be sorted");
  }
  if (!s_grid.empty() && !(s_grid.front() >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "s grid must be nonnegative");
  }
  const Potential phi = orbit_distance_potential(sft, orbit, depth);
  const detail::TransferSystem system(phi);
  std::vector<PathSample> samples(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) {
    const double s = std::min(s_grid[i], kSCap);
    samples[i] = equilibrium_sample(system, s_grid[i], s);
  });
  return Path{phi, std::move(samples)};
}

Path two_sided_path(const Sft& sft, const PeriodicOrbit& a, const PeriodicOrbit& b, int depth,
                    const std::vector<double>& t_grid) {
  for (double t : t_grid) {
    if (!(t >= -1.0 && t <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "path parameters must lie in [-1, 1]");
  }
  const Potential g = normalized_separation_potential(sft, a, b, depth);
  const detail::TransferSystem g_system(g);
  const auto eq0 = g_system.equilibrium(0.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) mean += eq0.cylinder_masses[i] * g.values()[i];
  const Potential phi = g.plus_constant(-mean);
  const detail::TransferSystem system(phi);

  std::vector<PathSample> samples(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    if (t == -1.0) {
      samples[i] = orbit_sample(phi, a, t, kSCap);
    } else if (t == 1.0) {
      samples[i] = orbit_sample(phi, b, t, -kSCap);
    } else {
      const double s = t == 0.0 ? 0.0 : std::clamp(-std::tan(std::numbers::pi * t / 2.0), -kSCap, kSCap);
      samples[i] = equilibrium_sample(system, t, s);
    }
  });
  return Path{phi, std::move(samples)};
}

ClaimContext claim_context(const Sft& sft, const Path& path, bool strict_entropy) {
  const RotationInterval rot = rotation_set(sft, path.potential);
  ClaimContext context;
  context.h_top = topological_entropy(sft);
  context.alpha_min = rot.alpha_min;
  context.alpha_max = rot.alpha_max;
  context.strict_entropy = strict_entropy;
  return context;
}

bool ClaimReport::all_pass() const {
  return std::all_of(claims.begin(), claims.end(), [](const ClaimResult& c) { return c.pass; });
}

const ClaimResult& ClaimReport::claim(const std::string& id) const {
  for (const auto& c : claims)
    if (c.id == id) return c;
  throw Error(ErrorKind::kInvalidArgument, "no claim named " + id);
}

ClaimReport verify_path_claims(const std::vector<PathSample>& samples, const ClaimContext& context) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return samples[i].s < samples[j].s; });

  ClaimResult integral{"integral-monotone", false, kInf, -1};
  ClaimResult unimodal{"entropy-unimodal", false, kInf, -1};
  ClaimResult gap{"gap-bound", false, kInf, -1};
  ClaimResult vanish{"entropy-vanishes", false, kInf, -1};
  ClaimResult identity{"pressure-identity", false, kInf, -1};
  ClaimResult strict{"entropy-strict", false, kInf, -1};

  for (std::size_t j = 0; j + 1 < order.size(); ++j) {
    const auto& p = samples[order[j]];
    const auto& q = samples[order[j + 1]];
    const int at = static_cast<int>(order[j + 1]);
    record(integral, q.integral - p.integral, at);
    if (q.s <= 0.0) record(unimodal, q.entropy - p.entropy, at);
    if (p.s >= 0.0) {
      record(unimodal, p.entropy - q.entropy, at);
      if (context.strict_entropy && p.entropy > kPositiveEntropy && q.s > p.s) {
        record(strict, p.entropy - q.entropy - kStrictGap, at);
      }
    }
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& p = samples[i];
    const int at = static_cast<int>(i);
    if (p.s > 0.0) {
      const double distance = context.alpha_max - p.integral;
      record(gap, std::min(distance, context.h_top / p.s - distance), at);
    } else if (p.s < 0.0) {
      const double distance = p.integral - context.alpha_min;
      record(gap, std::min(distance, context.h_top / -p.s - distance), at);
    }
    record(identity, -std::abs(p.pressure - p.entropy - p.s * p.integral), at);
  }
  // A point rotation set means a constant average: s moves nothing.
  const bool degenerate = context.alpha_max - context.alpha_min <= 1e-12;
  if (!order.empty() && !degenerate) {
    const auto& lowest = samples[order.front()];
    const auto& highest = samples[order.back()];
    if (highest.s > 0.0) record(vanish, context.zero_entropy_tol - highest.entropy, static_cast<int>(order.back()));
    if (lowest.s < 0.0) record(vanish, context.zero_entropy_tol - lowest.entropy, static_cast<int>(order.front()));
  }

  ClaimReport report;
  for (ClaimResult* c : {&integral, &unimodal, &gap, &vanish, &identity}) {
    if (c->worst_slack == kInf) c->worst_slack = 0.0;
    c->pass = c->worst_slack >= kSlackFloor;
    report.claims.push_back(*c);
  }
  if (vanish.witness_index >= 0) report.claims[3].pass = vanish.worst_slack >= 0.0;
  if (context.strict_entropy) {
    if (strict.worst_slack == kInf) strict.worst_slack = 0.0;
    strict.pass = strict.witness_index < 0 || strict.worst_slack > 0.0;
    report.claims.push_back(strict);
  }

  for (std::size_t j = 0; j + 1 < order.size(); ++j) {
    const auto& p = samples[order[j]];
    const auto& q = samples[order[j + 1]];
    const double ds = q.s - p.s;
    if (!(ds > 0.0) || p.cylinder_masses.size() != q.cylinder_masses.size()) continue;
    for (std::size_t w = 0; w < p.cylinder_masses.size(); ++w) {
      report.continuity_modulus =
          std::max(report.continuity_modulus, std::abs(q.cylinder_masses[w] - p.cylinder_masses[w]) / ds);
    }
  }
  return report;
}

}  // namespace mfs
