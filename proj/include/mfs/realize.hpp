#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mfs/convex.hpp"
#include "mfs/potential.hpp"
#include "mfs/sft.hpp"
#include "mfs/spectra.hpp"

namespace mfs {

/// 41 Chebyshev nodes on [-20, 20], ascending.
std::vector<double> default_t_eval();

struct RealizeOptions {
  std::vector<double> t_eval;       // empty: default_t_eval()
  int starts = 3;                   // start 0 is the zero table, the rest are random
  std::uint64_t seed = 7;
  int max_iterations = 300;
  double sharpness = 1e3;           // log-sum-exp parameter of the smoothed sup error
  double stop_error = 1e-13;        // sup pressure error that ends a run early
  std::optional<Potential> warm_start;  // extra start, lifted to the requested depth
  std::size_t spectrum_points = 0;  // realized spectrum samples; 0: as many as the target
};

struct RealizationResult {
  Potential potential;
  double target_error = 0.0;    // sup pressure error, or d_ms for spectrum targets
  double pressure_error = 0.0;  // max over t_eval of |P(t phi) - F(t)|
  int iterations = 0;
  bool converged = false;       // target_error <= tol
  int start_index = 0;          // which start produced the result; -1 for the warm start
  std::vector<double> objective_history;  // smoothed objective after each accepted step
  std::optional<RotationInterval> rotation;
  std::optional<SpectrumGraph> spectrum;  // realized spectrum for spectrum targets
};

/// Fits a depth-k potential with P(t phi) = F(t) on t_eval by preconditioned
/// descent on the log-sum-exp smoothed sup error with exact gradients
/// t * (equilibrium cylinder masses). Checks first, throwing
/// HypothesisViolation on failure: convexity, F(0) = h_top within tol,
/// nonnegative supporting-line intercepts (within tol), and matching
/// one-sided slopes at 0. Throws kInvalidArgument if t_eval or 0 leaves the
/// grid of F.
RealizationResult realize_pressure(const Sft& sft, const GridFunction& f, int depth, double tol,
                                   const RealizeOptions& options = {});

/// Realizes F = (-h)* and reports d_ms between the realized spectrum and h.
/// Throws kMaxEntropyMismatch unless max h = h_top within tol.
RealizationResult realize_spectrum(const Sft& sft, const CmsFunction& h, int depth, double tol,
                                   const RealizeOptions& options = {});

struct CohomologyWitness {
  PeriodicOrbit orbit1;
  PeriodicOrbit orbit2;
  double avg1 = 0.0;
  double avg2 = 0.0;
};

/// Periodic orbits (period <= max_period) on which the averages of phi - psi
/// differ by more than 1e-6: the orbits of least and greatest average.
/// None when all averages agree, as for potentials differing by a constant
/// plus a coboundary. Throws kSftMismatch, kPeriodTooLarge.
std::optional<CohomologyWitness> cohomology_witness(const Potential& phi, const Potential& psi, int max_period);

struct PairWitness {
  int i = 0;
  int j = 0;
  std::optional<CohomologyWitness> witness;  // none: unresolved
};

struct ManyRealization {
  std::vector<RealizationResult> results;
  std::vector<PairWitness> pairs;
  int unresolved = 0;
};

/// N realizations of h that are pairwise non-cohomologous where possible:
/// single-start runs over successive seeds, keeping runs within tol whose
/// difference with every kept run has a witness of period <= 12. A run
/// cohomologous to a kept one is first perturbed on cylinders carrying
/// equilibrium mass below 1e-8 at every t_eval. Throws kInvalidArgument for N < 1.
ManyRealization realize_many(const Sft& sft, const CmsFunction& h, int depth, int n, double tol,
                             const RealizeOptions& options = {});

}  // namespace mfs
