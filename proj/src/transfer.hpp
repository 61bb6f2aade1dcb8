#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "mfs/potential.hpp"
#include "mfs/thermo.hpp"

namespace mfs::detail {

/// Edge-weighted block graph of a depth-k potential: vertices are
/// max(k-1,1)-words, edges are admissible (L+1)-words and edge e carries
/// phi evaluated on its first k symbols.
class TransferSystem {
 public:
  struct Edge {
    int from;
    int to;
    int word;  // index into phi.values()
  };

  /// Throws kNotPrimitive if the underlying SFT is not primitive.
  explicit TransferSystem(const Potential& phi);

  const Potential& phi() const { return phi_; }
  int block_length() const { return block_length_; }
  std::size_t vertex_count() const { return states_->size(); }
  const std::shared_ptr<const WordIndex>& states() const { return states_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double edge_value(const Edge& e) const { return phi_.values()[static_cast<std::size_t>(e.word)]; }

  /// Weighted matrix exp(t phi(e)) conjugated by a diagonal scaling and
  /// divided by exp(shift), shift being the maximum cycle mean of t phi.
  /// Entries lie in (0, 1], critical cycles carry weight 1, so the Perron
  /// root lies in [1, vertex count]. The scaling changes neither the root
  /// nor the equilibrium state. Returns the shift.
  double weighted_matrix(double t, Eigen::MatrixXd& out) const;

  double pressure(double t) const;

  struct Equilibrium {
    double pressure;
    Eigen::MatrixXd stochastic;
    Eigen::VectorXd stationary;
    std::vector<double> cylinder_masses;  // aligned with phi.values()
  };
  Equilibrium equilibrium(double t) const;

  MarkovMeasure measure(Equilibrium eq) const;

 private:
  Potential phi_;
  int block_length_;
  std::shared_ptr<const WordIndex> states_;
  std::vector<Edge> edges_;
};

struct MaxMean {
  double mean = 0.0;
  std::vector<double> potential;  // u(to) >= u(from) + w(e) - mean for every edge
};

/// Maximum cycle mean (Karp) of a strongly connected edge-weighted graph with
/// Bellman-Ford potentials for the reduced weights.
MaxMean max_mean_potentials(std::size_t vertices, const std::vector<TransferSystem::Edge>& edges,
                            const std::vector<double>& weight);

}  // namespace mfs::detail
