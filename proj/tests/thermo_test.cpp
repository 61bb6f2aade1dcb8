#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "mfs/error.hpp"
#include "mfs/parallel.hpp"
#include "mfs/rng.hpp"
#include "mfs/thermo.hpp"
#include "support.hpp"

using namespace mfs;

namespace {

// log spectral radius of the transfer matrix on (L+1)-words, L = max(k-1, 1),
// built directly and solved with a general eigensolver.
double eigen_pressure(const Sft& sft, const Potential& phi, double t) {
  const int l = std::max(phi.depth() - 1, 1);
  const auto states = admissible_words(sft, l);
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const Word& u = states[static_cast<std::size_t>(a)];
      const Word& v = states[static_cast<std::size_t>(b)];
      if (!std::equal(u.begin() + 1, u.end(), v.begin()) || !sft.allowed(u.back(), v.back())) continue;
      Word w = u;
      w.push_back(v.back());
      m(a, b) = std::exp(t * phi(w));
    }
  }
  return std::log(Eigen::EigenSolver<Eigen::MatrixXd>(m).eigenvalues().cwiseAbs().maxCoeff());
}

Potential random_potential(const Sft& sft, int depth, CounterRng& rng) {
  return Potential::from_function(sft, depth, [&](std::span<const Symbol>) { return rng.uniform(-1.5, 1.5); });
}

std::vector<std::pair<Sft, Potential>> test_cases() {
  CounterRng rng(21, 0);
  std::vector<std::pair<Sft, Potential>> out;
  for (const Sft& s : {full_shift(2), golden_mean_shift(), test::three_symbol_sft()}) {
    for (int k = 1; k <= 3; ++k) out.emplace_back(s, random_potential(s, k, rng));
  }
  return out;
}

}  // namespace

TEST_SUITE("thermo") {
  TEST_CASE("pressure closed forms") {
    const Sft s = full_shift(2);
    const Potential x0 = test::first_symbol(s);
    for (double t : {-1000.0, -30.0, -1.0, 0.0, 0.5, 1.0, 7.0, 30.0, 1000.0}) {
      CHECK(std::abs(pressure(s, Potential::constant(s, 1, 0.0), t) - std::log(2.0)) < 1e-14);
      CHECK(std::abs(pressure(s, x0, t) - test::softplus(t)) < 1e-12 * std::max(1.0, std::abs(t)));
    }
  }

  TEST_CASE("pressure agrees with a general eigensolver") {
    for (const auto& [s, phi] : test_cases()) {
      for (double t : {-3.0, -0.7, 0.0, 1.3, 4.0}) {
        const double expected = eigen_pressure(s, phi, t);
        CHECK(std::abs(pressure(s, phi, t) - expected) < 1e-11 * std::max(1.0, std::abs(expected)));
      }
      CHECK(std::abs(pressure(s, phi, 0.0) - topological_entropy(s)) < 1e-12);
    }
  }

  TEST_CASE("equilibrium closed forms") {
    const Sft s = full_shift(2);
    const MarkovMeasure uniform = equilibrium_measure(s, Potential::constant(s, 1, 0.3), 5.0);
    CHECK(std::abs(uniform.cylinder_mass(word_from_string("0")) - 0.5) < 1e-14);
    CHECK(std::abs(uniform.cylinder_mass(word_from_string("01")) - 0.25) < 1e-14);
    CHECK(std::abs(measure_entropy(uniform) - std::log(2.0)) < 1e-14);

    for (double t : {-2.0, 0.5, 1.0}) {
      const MarkovMeasure m = equilibrium_measure(s, test::first_symbol(s), t);
      const double p1 = std::exp(t) / (1.0 + std::exp(t));
      CHECK(std::abs(m.cylinder_mass(word_from_string("1")) - p1) < 1e-13);
      CHECK(std::abs(m.cylinder_mass(word_from_string("10")) - p1 * (1.0 - p1)) < 1e-13);
      CHECK(std::abs(measure_integral(m, test::first_symbol(s)) - p1) < 1e-13);
    }

    // Parry measure: stationary law is left times right eigenvector, (g^2, 1) normalized.
    const double g = test::golden_ratio();
    const MarkovMeasure parry = equilibrium_measure(golden_mean_shift(), Potential::constant(golden_mean_shift(), 1, 0.0), 0.0);
    CHECK(std::abs(parry.cylinder_mass(word_from_string("0")) - g * g / (g * g + 1.0)) < 1e-13);
    CHECK(std::abs(parry.cylinder_mass(word_from_string("01")) - 1.0 / (g * g + 1.0)) < 1e-13);
    CHECK(std::abs(measure_entropy(parry) - std::log(g)) < 1e-13);
  }

  TEST_CASE("markov measure invariants") {
    for (const auto& [s, phi] : test_cases()) {
      for (double t : {-5.0, 0.0, 2.0}) {
        const MarkovMeasure m = equilibrium_measure(s, phi, t);
        const auto& p = m.stochastic();
        const auto& pi = m.stationary();
        CHECK(std::abs(pi.sum() - 1.0) < 1e-12);
        CHECK(((p.rowwise().sum().array() - 1.0).abs() < 1e-12).all());
        CHECK((pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
        for (Eigen::Index a = 0; a < p.rows(); ++a)
          for (Eigen::Index b = 0; b < p.cols(); ++b)
            if (p(a, b) > 0.0) CHECK(m.edge_allowed(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
        const double h = measure_entropy(m);
        CHECK(h >= 0.0);
        CHECK(h <= topological_entropy(s) + 1e-12);
        const double integral = measure_integral(m, phi);
        CHECK(integral >= phi.min() - 1e-12);
        CHECK(integral <= phi.max() + 1e-12);
      }
    }
  }

  TEST_CASE("variational identity") {
    for (const auto& [s, phi] : test_cases()) {
      for (double t : {-8.0, -1.0, 0.0, 0.3, 2.5, 8.0}) {
        const MarkovMeasure m = equilibrium_measure(s, phi, t);
        CHECK(std::abs(measure_entropy(m) + t * measure_integral(m, phi) - pressure(s, phi, t)) < 1e-9);
      }
    }
  }

  TEST_CASE("orbit measures") {
    const Sft s = full_shift(2);
    for (int k = 1; k <= 4; ++k) {
      const PeriodicOrbit zero(s, word_from_string("0"));
      const MarkovMeasure m = orbit_measure(s, zero, std::max(k - 1, 1));
      CHECK(measure_entropy(m) == 0.0);
      CHECK(measure_integral(m, orbit_distance_potential(s, zero, k)) == -std::ldexp(1.0, -k));
      CHECK(measure_integral(m, Potential::constant(s, k, 2.5)) == doctest::Approx(2.5).epsilon(1e-15));
    }
    const MarkovMeasure m = orbit_measure(s, PeriodicOrbit(s, word_from_string("011")), 2);
    CHECK(std::abs(m.cylinder_mass(word_from_string("11")) - 1.0 / 3.0) < 1e-15);
    CHECK_THROWS_AS(orbit_measure(s, PeriodicOrbit(s, word_from_string("0011")), 1), Error);
  }

  TEST_CASE("pressure gradient") {
    const Sft s = full_shift(2);
    const auto flat = pressure_gradient(s, Potential::constant(s, 1, 0.0), 1.0);
    CHECK(std::abs(flat[0] - 0.5) < 1e-14);
    CHECK(std::abs(flat[1] - 0.5) < 1e-14);
    const auto g = pressure_gradient(s, test::first_symbol(s), 1.0);
    CHECK(std::abs(g[0] - 1.0 / (1.0 + std::exp(1.0))) < 1e-13);
    CHECK(std::abs(g[1] - std::exp(1.0) / (1.0 + std::exp(1.0))) < 1e-13);

    // Moderate tables keep every cylinder mass well above the roundoff of the
    // difference quotient, so the relative criterion is meaningful.
    const double h = 1e-5;
    CounterRng rng(33, 1);
    for (const Sft& sft : {full_shift(2), golden_mean_shift(), test::three_symbol_sft()}) {
      const Potential phi = Potential::from_function(sft, 2, [&](std::span<const Symbol>) { return rng.uniform(-0.5, 0.5); });
      for (double t : {-1.0, 0.5, 2.0}) {
        const auto grad = pressure_gradient(sft, phi, t);
        const Potential psi = phi.scaled(t);
        double sum = 0.0;
        for (std::size_t w = 0; w < grad.size(); ++w) {
          CHECK(grad[w] >= 0.0);
          sum += grad[w];
          auto up = psi.values();
          auto down = psi.values();
          up[w] += h;
          down[w] -= h;
          const double fd = (pressure(sft, psi.with_values(up), 1.0) - pressure(sft, psi.with_values(down), 1.0)) / (2.0 * h);
          CHECK(std::abs(fd - grad[w]) <= 1e-6 * grad[w]);
        }
        CHECK(std::abs(sum - 1.0) < 1e-10);
      }
    }
  }

  TEST_CASE("pressure curves are convex, Lipschitz and thread independent") {
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(-6.0 + 0.2 * i);
    for (const auto& [s, phi] : test_cases()) {
      set_thread_count(1);
      const PressureCurve one = pressure_curve(s, phi, grid);
      set_thread_count(4);
      const PressureCurve many = pressure_curve(s, phi, grid);
      CHECK(one.values == many.values);
      for (std::size_t i = 0; i < grid.size(); ++i) CHECK(one.values[i] == pressure(s, phi, grid[i]));
      for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        CHECK(one.values[i + 1] - 2.0 * one.values[i] + one.values[i - 1] >= -1e-9);
      }
      for (std::size_t i = 0; i < grid.size(); i += 7)
        for (std::size_t j = 0; j < grid.size(); j += 5)
          CHECK(std::abs(one.values[i] - one.values[j]) <= std::abs(grid[i] - grid[j]) * phi.sup_norm() + 1e-9);
    }
    set_thread_count(0);
    CHECK_THROWS_AS(pressure_curve(full_shift(2), test::first_symbol(full_shift(2)), {1.0, 0.0}), Error);
    const PressureCurve c = pressure_curve(full_shift(2), test::first_symbol(full_shift(2)), {-1.0, 0.0, 1.0});
    CHECK(std::abs(c.values[0] - std::log(1.0 + std::exp(-1.0))) < 1e-14);
    CHECK(std::abs(c.values[1] - std::log(2.0)) < 1e-14);
    CHECK(std::abs(c.values[2] - std::log(1.0 + std::exp(1.0))) < 1e-14);
  }

  TEST_CASE("derivative of pressure is the equilibrium integral") {
    for (const auto& [s, phi] : test_cases()) {
      const double t = 0.8;
      const double integral = measure_integral(equilibrium_measure(s, phi, t), phi);
      double previous = INFINITY;
      for (double h : {1e-3, 1e-4}) {
        const double fd = (pressure(s, phi, t + h) - pressure(s, phi, t - h)) / (2.0 * h);
        const double error = std::abs(fd - integral);
        CHECK(error < 10.0 * h * h * std::pow(phi.sup_norm(), 3) + 1e-10);
        CHECK(error <= previous);
        previous = error;
      }
    }
  }

  TEST_CASE("errors") {
    const Sft periodic = build_sft(2, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(pressure(periodic, Potential::constant(periodic, 1, 0.0), 1.0), Error);
    CHECK_THROWS_AS(pressure(full_shift(2), test::first_symbol(golden_mean_shift()), 1.0), Error);
  }
}
