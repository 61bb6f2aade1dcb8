#pragma once

#include <string>
#include <vector>

#include "mfs/potential.hpp"
#include "mfs/sft.hpp"

namespace mfs {

/// One equilibrium state along a path. For the single-sided path t == s.
struct PathSample {
  double t = 0.0;
  double s = 0.0;
  double integral = 0.0;
  double entropy = 0.0;
  double pressure = 0.0;
  std::vector<double> cylinder_masses;  // aligned with the path potential's words
};

struct Path {
  Potential potential;
  std::vector<PathSample> samples;
};

/// Equilibrium states of s * phi for phi = orbit_distance_potential(orbit, depth).
/// Throws kInvalidArgument unless s_grid is sorted and nonnegative.
Path single_sided_path(const Sft& sft, const PeriodicOrbit& orbit, int depth, const std::vector<double>& s_grid);

/// Equilibrium states of s * phi with s = -tan(pi t / 2), where
/// phi = g - integral of g against the measure of maximal entropy and
/// g = normalized_separation_potential(a, b, depth). |s| is capped at 1e6;
/// t = -1 and t = 1 give the orbit measures of a and b (entropy 0).
/// Throws kInvalidArgument for t outside [-1, 1], kOrbitsIntersect.
Path two_sided_path(const Sft& sft, const PeriodicOrbit& a, const PeriodicOrbit& b, int depth,
                    const std::vector<double>& t_grid);

struct ClaimContext {
  double h_top = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  bool strict_entropy = false;    // entropy strictly decreasing for s >= 0 while positive
  double zero_entropy_tol = 0.05;
};

/// Context for a path: entropy of the SFT and rotation set of its potential.
ClaimContext claim_context(const Sft& sft, const Path& path, bool strict_entropy);

struct ClaimResult {
  std::string id;
  bool pass = false;
  double worst_slack = 0.0;
  int witness_index = -1;  // sample index where the worst slack occurs
};

struct ClaimReport {
  std::vector<ClaimResult> claims;
  double continuity_modulus = 0.0;  // max |change of cylinder mass| / |change of s|
  bool all_pass() const;
  const ClaimResult& claim(const std::string& id) const;
};

/// Checks, with samples ordered by s:
///   integral-monotone: integral nondecreasing in s;
///   entropy-unimodal: entropy nondecreasing for s <= 0, nonincreasing for s >= 0;
///   gap-bound: 0 <= M - integral <= h_top / s for s > 0 (mirrored with the
///     lower end for s < 0);
///   entropy-vanishes: entropy <= zero_entropy_tol at the extreme samples
///     (vacuous when the rotation set is a point);
///   pressure-identity: |pressure - entropy - s * integral| small.
/// With strict_entropy also entropy-strict: positive entropies drop by more
/// than 1e-12 between adjacent samples with s >= 0.
/// Non-strict checks pass when their slack is at least -1e-9.
ClaimReport verify_path_claims(const std::vector<PathSample>& samples, const ClaimContext& context);

}  // namespace mfs
