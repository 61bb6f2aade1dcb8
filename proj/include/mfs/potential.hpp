#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mfs/sft.hpp"

namespace mfs {

/// Locally constant potential of depth k: phi(x) depends on x_0..x_{k-1}
/// only. Values (nats per symbol) are stored in the order of
/// admissible_words(sft, k).
class Potential {
 public:
  Potential(Sft sft, int depth, std::vector<double> values);

  static Potential from_function(const Sft& sft, int depth,
                                 const std::function<double(std::span<const Symbol>)>& f);
  static Potential constant(const Sft& sft, int depth, double value);

  const Sft& sft() const { return sft_; }
  int depth() const { return depth_; }
  const std::vector<Word>& words() const { return index_->words(); }
  const WordIndex& index() const { return *index_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Value on a sequence given by at least depth() leading symbols.
  double operator()(std::span<const Symbol> sequence) const;
  int index_of(std::span<const Symbol> word) const { return index_->find(word.first(depth_)); }

  double min() const;
  double max() const;
  double sup_norm() const;

  /// Same function written at a larger depth.
  Potential lifted(int depth) const;
  Potential scaled(double factor) const;
  Potential plus_constant(double c) const;
  /// x -> phi(sigma x), written at depth + 1.
  Potential composed_with_shift() const;
  Potential with_values(std::vector<double> values) const;

 private:
  Sft sft_;
  int depth_;
  std::shared_ptr<const WordIndex> index_;
  std::vector<double> values_;
};

/// Periodic point x = (word)^infinity; its orbit measure is mu_x.
class PeriodicOrbit {
 public:
  /// Throws kInvalidArgument for an empty or non-primitive word.
  explicit PeriodicOrbit(Word word);
  /// Additionally throws kOrbitNotAdmissible unless the word is cyclically admissible.
  PeriodicOrbit(const Sft& sft, Word word);

  const Word& word() const { return word_; }
  int period() const { return static_cast<int>(word_.size()); }
  /// Symbol i of sigma^shift(x).
  Symbol symbol(int shift, int i) const { return word_[static_cast<std::size_t>((shift + i) % period())]; }
  /// First n symbols of sigma^shift(x).
  Word prefix(int shift, int n) const;
  /// Same orbit written from its lexicographically smallest rotation.
  PeriodicOrbit canonical() const;
  bool same_orbit(const PeriodicOrbit& other) const;

  bool operator==(const PeriodicOrbit& other) const = default;

 private:
  Word word_;
};

/// Average of p over one period of the cyclically extended orbit.
double birkhoff_average(const Potential& p, const PeriodicOrbit& orbit);

/// Depth-k truncation of -d(., orbit) for d(x,y) = 2^{-min{i : x_i != y_i}}:
/// the value on w is -2^{-j}, j the longest common prefix of w with an orbit
/// point, capped at k. Values lie in [-1, -2^{-k}].
Potential orbit_distance_potential(const Sft& sft, const PeriodicOrbit& orbit, int depth);

/// Depth-k truncation of g = (d(z,B) - d(z,A)) / (d(z,A) + d(z,B)), where a
/// k-word that prefixes an orbit point has distance 0 to that orbit. +1 on
/// prefixes of A, -1 on prefixes of B. Throws kOrbitsIntersect if the orbits
/// share a point or a k-prefix.
Potential normalized_separation_potential(const Sft& sft, const PeriodicOrbit& a, const PeriodicOrbit& b,
                                          int depth);

/// (1-t)p + tq at depth max(p.depth, q.depth). Throws kSftMismatch.
Potential affine_combine(const Potential& p, const Potential& q, double t);

}  // namespace mfs
