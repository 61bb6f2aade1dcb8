#pragma once

#include <cstdint>
#include <vector>

#include "mfs/potential.hpp"
#include "mfs/sft.hpp"
#include "mfs/spectra.hpp"

namespace mfs {

constexpr int kMaxCatalogPeriod = 16;

/// Every periodic orbit of period at most max_period, one canonical
/// (lexicographically least) rotation per orbit, sorted within each period.
struct OrbitCatalog {
  int max_period = 0;
  std::vector<std::vector<PeriodicOrbit>> by_period;  // by_period[p - 1]

  const std::vector<PeriodicOrbit>& period(int p) const { return by_period[static_cast<std::size_t>(p - 1)]; }
  std::vector<PeriodicOrbit> all() const;
};

/// Throws kPeriodTooLarge above kMaxCatalogPeriod, kInvalidArgument below 1.
OrbitCatalog enumerate_orbits(const Sft& sft, int max_period);

/// trace(A^n) for n = 1..max_period, the number of points of period n.
/// Throws kTooLarge on 64-bit overflow.
std::vector<std::uint64_t> periodic_point_counts(const Sft& sft, int max_period);

/// sum over d | n of d * (number of orbits of least period d), n = 1..max_period.
std::vector<std::uint64_t> catalog_point_counts(const OrbitCatalog& catalog);

/// (1/n) log sum over points x with sigma^n x = x of exp(t S_n phi(x)),
/// by direct enumeration of cyclic words. Throws kPeriodTooLarge.
double periodic_pressure(const Sft& sft, const Potential& phi, double t, int n);

/// Word-count estimate of the level-set entropies: n-words that close up
/// into a cycle (the points of period n) are binned by their cyclic average
/// of phi on [phi.min(), phi.max()]; each occupied bin gives the point
/// (mean average, log(count) / n). Every average is a periodic-orbit
/// average, so the points stay inside the rotation set. Throws kTooLarge
/// when alphabet_size^n exceeds 2^24.
SpectrumGraph word_count_spectrum(const Sft& sft, const Potential& phi, int n, int bins);

}  // namespace mfs
