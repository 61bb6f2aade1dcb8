#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mfs/potential.hpp"
#include "mfs/sft.hpp"

namespace mfs {

/// Stationary Markov chain on the L-block presentation of an SFT. States are
/// admissible_words(base, L); the chain moves along overlapping (L+1)-words.
class MarkovMeasure {
 public:
  /// Checks row sums and stationary sum (1e-12), stationarity residual
  /// (1e-10) and that the support lies on allowed edges.
  MarkovMeasure(Sft base, int block_length, Eigen::MatrixXd stochastic, Eigen::VectorXd stationary);
  /// Same, reusing an existing state index (must be admissible_words(base, block_length)).
  MarkovMeasure(Sft base, std::shared_ptr<const WordIndex> states, Eigen::MatrixXd stochastic,
                Eigen::VectorXd stationary);

  const Sft& base() const { return base_; }
  int block_length() const { return block_length_; }
  const WordIndex& states() const { return *states_; }
  Sft recoded() const { return higher_block(base_, block_length_); }
  const Eigen::MatrixXd& stochastic() const { return stochastic_; }
  const Eigen::VectorXd& stationary() const { return stationary_; }

  /// Measure of the cylinder [word]; zero for inadmissible words.
  double cylinder_mass(std::span<const Symbol> word) const;

  /// Edge a -> b of the block graph exists.
  bool edge_allowed(std::size_t a, std::size_t b) const;

 private:
  Sft base_;
  int block_length_;
  std::shared_ptr<const WordIndex> states_;
  Eigen::MatrixXd stochastic_;
  Eigen::VectorXd stationary_;
};

/// Values of t -> P(t phi) on a sorted grid.
struct PressureCurve {
  std::vector<double> t_grid;
  std::vector<double> values;
  Potential phi;
};

/// P(t phi): log Perron root of the weighted transfer matrix on the
/// max(k-1,1)-block graph, with max(t*phi) factored out before exponentiation.
/// Throws kNotPrimitive, kSftMismatch.
double pressure(const Sft& sft, const Potential& phi, double t);

/// Gibbs-Markov equilibrium state of t phi built from the left and right
/// Perron vectors: P(a,b) = w(a,b) r(b) / (lambda r(a)), pi = l*r normalized.
MarkovMeasure equilibrium_measure(const Sft& sft, const Potential& phi, double t);

/// -sum_a pi(a) sum_b P(a,b) log P(a,b), with 0 log 0 = 0.
double measure_entropy(const MarkovMeasure& m);

/// sum over depth-k words w of m([w]) phi(w). Throws kSftMismatch.
double measure_integral(const MarkovMeasure& m, const Potential& phi);

/// dP(psi)/dpsi_w at psi = t phi: the equilibrium mass of each cylinder
/// [w], aligned with phi.words().
std::vector<double> pressure_gradient(const Sft& sft, const Potential& phi, double t);

/// Throws kInvalidArgument for an unsorted grid.
PressureCurve pressure_curve(const Sft& sft, const Potential& phi, std::vector<double> t_grid);

/// The periodic-orbit measure as an L-block Markov chain. Throws
/// kInvalidArgument if L is too short for the orbit to be L-step Markov.
MarkovMeasure orbit_measure(const Sft& sft, const PeriodicOrbit& orbit, int block_length);

}  // namespace mfs
