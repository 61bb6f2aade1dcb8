#include "mfs/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfs/error.hpp"
#include "mfs/parallel.hpp"
#include "mfs/perron.hpp"
#include "transfer.hpp"

namespace mfs {

namespace detail {

namespace {

constexpr double kTinyVector = 1e-280;
const PowerIterationOptions kScaledOptions{1e-12, 100000, 1.0};

}  // namespace

TransferSystem::TransferSystem(const Potential& phi) : phi_(phi) {
  if (!phi.sft().primitive()) throw Error(ErrorKind::kNotPrimitive, "transfer operator needs a primitive SFT");
  block_length_ = std::max(phi.depth() - 1, 1);
  states_ = std::make_shared<const WordIndex>(phi.sft(), block_length_);
  const auto edge_words = admissible_words(phi.sft(), block_length_ + 1);
  edges_.reserve(edge_words.size());
  for (const auto& w : edge_words) {
    const std::span<const Symbol> span(w);
    Edge e;
    e.from = states_->find(span.first(static_cast<std::size_t>(block_length_)));
    e.to = states_->find(span.subspan(1));
    e.word = phi_.index_of(span);
    edges_.push_back(e);
  }
}

double TransferSystem::weighted_matrix(double t, Eigen::MatrixXd& out) const {
  const auto n = static_cast<Eigen::Index>(vertex_count());
  std::vector<double> weight(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) weight[e] = t * edge_value(edges_[e]);
  const MaxMean mm = max_mean_potentials(vertex_count(), edges_, weight);
  out.setZero(n, n);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    const double exponent = weight[e] - mm.mean + mm.potential[static_cast<std::size_t>(edge.from)] -
                            mm.potential[static_cast<std::size_t>(edge.to)];
    out(edge.from, edge.to) = std::exp(std::min(exponent, 0.0));
  }
  return mm.mean;
}

double TransferSystem::pressure(double t) const {
  Eigen::MatrixXd m;
  const double shift = weighted_matrix(t, m);
  return std::log(perron_right(m, kScaledOptions).root) + shift;
}

TransferSystem::Equilibrium TransferSystem::equilibrium(double t) const {
  Eigen::MatrixXd m;
  const double shift = weighted_matrix(t, m);
  const PerronEigen right = perron_right(m, kScaledOptions);
  const PerronEigen left = perron_left(m, kScaledOptions);
  const double lambda = right.root;
  const auto n = m.rows();

  Equilibrium eq;
  eq.pressure = std::log(lambda) + shift;
  eq.stochastic.setZero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const double ra = right.vector[a];
    if (ra > kTinyVector) {
      for (Eigen::Index b = 0; b < n; ++b) eq.stochastic(a, b) = m(a, b) * right.vector[b] / (lambda * ra);
    } else {
      eq.stochastic.row(a) = m.row(a);
    }
    const double row = eq.stochastic.row(a).sum();
    if (row > 0.0) eq.stochastic.row(a) /= row;
  }
  // Rows whose weights all underflow carry no stationary mass; any allowed law will do.
  std::vector<int> out_degree(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges_) ++out_degree[static_cast<std::size_t>(e.from)];
  for (const auto& e : edges_) {
    if (!(eq.stochastic.row(e.from).sum() > 0.5)) {
      eq.stochastic(e.from, e.to) = 1.0 / out_degree[static_cast<std::size_t>(e.from)];
    }
  }

  Eigen::VectorXd pi = left.vector.cwiseProduct(right.vector);
  pi /= pi.sum();
  // A few stationarity sweeps tighten pi to the normalized chain; keep a sweep only if it helps.
  double residual = (eq.stochastic.transpose() * pi - pi).lpNorm<Eigen::Infinity>();
  for (int sweep = 0; sweep < 20 && residual > 1e-15; ++sweep) {
    Eigen::VectorXd next = eq.stochastic.transpose() * pi;
    next /= next.sum();
    const double next_residual = (eq.stochastic.transpose() * next - next).lpNorm<Eigen::Infinity>();
    if (next_residual >= residual) break;
    pi = next;
    residual = next_residual;
  }
  eq.stationary = pi;

  eq.cylinder_masses.assign(phi_.size(), 0.0);
  if (phi_.depth() == 1) {
    for (Eigen::Index a = 0; a < n; ++a) eq.cylinder_masses[static_cast<std::size_t>(a)] = pi[a];
  } else {
    for (const auto& e : edges_) {
      eq.cylinder_masses[static_cast<std::size_t>(e.word)] = pi[e.from] * eq.stochastic(e.from, e.to);
    }
  }
  return eq;
}

MaxMean max_mean_potentials(std::size_t vertices, const std::vector<TransferSystem::Edge>& edges,
                            const std::vector<double>& weight) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const std::size_t n = vertices;
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, kNegInf));
  std::fill(d[0].begin(), d[0].end(), 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto from = static_cast<std::size_t>(edges[e].from);
      const auto to = static_cast<std::size_t>(edges[e].to);
      if (d[k - 1][from] == kNegInf) continue;
      d[k][to] = std::max(d[k][to], d[k - 1][from] + weight[e]);
    }
  }
  MaxMean out;
  out.mean = kNegInf;
  for (std::size_t v = 0; v < n; ++v) {
    if (d[n][v] == kNegInf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (d[k][v] == kNegInf) continue;
      worst = std::min(worst, (d[n][v] - d[k][v]) / static_cast<double>(n - k));
    }
    out.mean = std::max(out.mean, worst);
  }
  out.potential.assign(n, 0.0);
  for (std::size_t round = 0; round <= n; ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto from = static_cast<std::size_t>(edges[e].from);
      const auto to = static_cast<std::size_t>(edges[e].to);
      const double candidate = out.potential[from] + (weight[e] - out.mean);
      if (candidate > out.potential[to]) {
        out.potential[to] = candidate;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return out;
}

MarkovMeasure TransferSystem::measure(Equilibrium eq) const {
  return MarkovMeasure(phi_.sft(), states_, std::move(eq.stochastic), std::move(eq.stationary));
}

}  // namespace detail

MarkovMeasure::MarkovMeasure(Sft base, int block_length, Eigen::MatrixXd stochastic, Eigen::VectorXd stationary)
    : MarkovMeasure(base, std::make_shared<const WordIndex>(base, block_length), std::move(stochastic),
                    std::move(stationary)) {}

MarkovMeasure::MarkovMeasure(Sft base, std::shared_ptr<const WordIndex> states, Eigen::MatrixXd stochastic,
                             Eigen::VectorXd stationary)
    : base_(std::move(base)),
      block_length_(states->length()),
      states_(std::move(states)),
      stochastic_(std::move(stochastic)),
      stationary_(std::move(stationary)) {
  const auto n = static_cast<Eigen::Index>(states_->size());
  if (stochastic_.rows() != n || stochastic_.cols() != n || stationary_.size() != n) {
    throw Error(ErrorKind::kInvalidArgument, "Markov measure dimensions do not match the block alphabet");
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    if (std::abs(stochastic_.row(a).sum() - 1.0) > 1e-12) {
      throw Error(ErrorKind::kInvalidArgument, "stochastic row " + std::to_string(a) + " does not sum to 1");
    }
    for (Eigen::Index b = 0; b < n; ++b) {
      if (stochastic_(a, b) < 0.0) throw Error(ErrorKind::kInvalidArgument, "negative transition probability");
      if (stochastic_(a, b) > 0.0 && !edge_allowed(static_cast<std::size_t>(a), static_cast<std::size_t>(b))) {
        throw Error(ErrorKind::kInvalidArgument, "transition probability on a forbidden edge");
      }
    }
    if (stationary_[a] < 0.0) throw Error(ErrorKind::kInvalidArgument, "negative stationary mass");
  }
  if (std::abs(stationary_.sum() - 1.0) > 1e-12) {
    throw Error(ErrorKind::kInvalidArgument, "stationary vector does not sum to 1");
  }
  const double residual = (stochastic_.transpose() * stationary_ - stationary_).lpNorm<Eigen::Infinity>();
  if (residual > 1e-10) {
    throw Error(ErrorKind::kInvalidArgument, "stationarity residual " + std::to_string(residual));
  }
}

bool MarkovMeasure::edge_allowed(std::size_t a, std::size_t b) const {
  const Word& u = states_->word(a);
  const Word& v = states_->word(b);
  if (!base_.allowed(u.back(), v.back())) return false;
  return std::equal(u.begin() + 1, u.end(), v.begin());
}

double MarkovMeasure::cylinder_mass(std::span<const Symbol> word) const {
  const auto len = static_cast<int>(word.size());
  if (len == 0) return 1.0;
  if (len < block_length_) {
    double total = 0.0;
    for (std::size_t i = 0; i < states_->size(); ++i) {
      const Word& s = states_->word(i);
      if (std::equal(word.begin(), word.end(), s.begin())) total += stationary_[static_cast<Eigen::Index>(i)];
    }
    return total;
  }
  const auto l = static_cast<std::size_t>(block_length_);
  int state = states_->find(word.first(l));
  if (state < 0) return 0.0;
  double mass = stationary_[state];
  for (std::size_t i = 1; i + l <= word.size(); ++i) {
    const int next = states_->find(word.subspan(i, l));
    if (next < 0) return 0.0;
    mass *= stochastic_(state, next);
    state = next;
  }
  return mass;
}

double pressure(const Sft& sft, const Potential& phi, double t) {
  if (!(sft == phi.sft())) throw Error(ErrorKind::kSftMismatch, "potential lives on a different SFT");
  return detail::TransferSystem(phi).pressure(t);
}

MarkovMeasure equilibrium_measure(const Sft& sft, const Potential& phi, double t) {
  if (!(sft == phi.sft())) throw Error(ErrorKind::kSftMismatch, "potential lives on a different SFT");
  const detail::TransferSystem system(phi);
  return system.measure(system.equilibrium(t));
}

double measure_entropy(const MarkovMeasure& m) {
  const auto& p = m.stochastic();
  const auto& pi = m.stationary();
  double h = 0.0;
  for (Eigen::Index a = 0; a < p.rows(); ++a) {
    double row = 0.0;
    for (Eigen::Index b = 0; b < p.cols(); ++b) {
      const double q = p(a, b);
      if (q > 0.0) row -= q * std::log(q);
    }
    h += pi[a] * row;
  }
  return std::max(h, 0.0);
}

double measure_integral(const MarkovMeasure& m, const Potential& phi) {
  if (!(m.base() == phi.sft())) throw Error(ErrorKind::kSftMismatch, "measure and potential on different SFTs");
  double total = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) total += m.cylinder_mass(phi.words()[i]) * phi.values()[i];
  return total;
}

std::vector<double> pressure_gradient(const Sft& sft, const Potential& phi, double t) {
  if (!(sft == phi.sft())) throw Error(ErrorKind::kSftMismatch, "potential lives on a different SFT");
  return detail::TransferSystem(phi).equilibrium(t).cylinder_masses;
}

PressureCurve pressure_curve(const Sft& sft, const Potential& phi, std::vector<double> t_grid) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw Error(ErrorKind::kInvalidArgument, "pressure curve grid must be sorted");
  }
  if (!(sft == phi.sft())) throw Error(ErrorKind::kSftMismatch, "potential lives on a different SFT");
  const detail::TransferSystem system(phi);
  std::vector<double> values(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) { values[i] = system.pressure(t_grid[i]); });
  return PressureCurve{std::move(t_grid), std::move(values), phi};
}

MarkovMeasure orbit_measure(const Sft& sft, const PeriodicOrbit& orbit, int block_length) {
  if (!is_cyclically_admissible(sft, orbit.word())) {
    throw Error(ErrorKind::kOrbitNotAdmissible, "orbit is not admissible");
  }
  auto states = std::make_shared<const WordIndex>(sft, block_length);
  const auto n = static_cast<Eigen::Index>(states->size());
  const int p = orbit.period();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd visits = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < p; ++j) {
    const int a = states->find(orbit.prefix(j, block_length));
    const int b = states->find(orbit.prefix((j + 1) % p, block_length));
    counts(a, b) += 1.0;
    visits[a] += 1.0;
  }
  Eigen::MatrixXd stochastic = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    if (visits[a] > 0.0) {
      if ((counts.row(a).array() > 0.0).count() > 1) {
        throw Error(ErrorKind::kInvalidArgument, "orbit " + word_to_string(orbit.word()) + " is not " +
                                                     std::to_string(block_length) + "-step Markov");
      }
      stochastic.row(a) = counts.row(a) / visits[a];
    } else {
      // Off-orbit states carry no mass; any row supported on allowed edges will do.
      const Word& u = states->word(static_cast<std::size_t>(a));
      std::vector<Eigen::Index> successors;
      for (Eigen::Index b = 0; b < n; ++b) {
        const Word& v = states->word(static_cast<std::size_t>(b));
        if (sft.allowed(u.back(), v.back()) && std::equal(u.begin() + 1, u.end(), v.begin())) {
          successors.push_back(b);
        }
      }
      for (auto b : successors) stochastic(a, b) = 1.0 / static_cast<double>(successors.size());
    }
  }
  return MarkovMeasure(sft, std::move(states), std::move(stochastic), visits / static_cast<double>(p));
}

}  // namespace mfs
