#include <cmath>

#include "doctest.h"
#include "mfs/error.hpp"
#include "mfs/realize.hpp"
#include "mfs/thermo.hpp"
#include "support.hpp"

using namespace mfs;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kIo;
}

GridFunction logistic_target() { return GridFunction::uniform(-25.0, 25.0, 4001, test::softplus); }

}  // namespace

TEST_SUITE("realize") {
  TEST_CASE("evaluation grid") {
    const auto t = default_t_eval();
    REQUIRE(t.size() == 41);
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(std::abs(t.front() + 20.0 * std::cos(M_PI / 82.0)) < 1e-12);
    CHECK(std::abs(t[20]) < 1e-12);
  }

  TEST_CASE("logistic pressure is recovered") {
    const Sft s = full_shift(2);
    const RealizationResult r = realize_pressure(s, logistic_target(), 1, 1e-8);
    CHECK(r.converged);
    CHECK(r.pressure_error < 1e-8);
    CHECK(r.target_error == r.pressure_error);
    // Up to coboundaries and constants a depth-1 table is fixed by its two fixed points.
    CHECK(std::abs(r.potential.values()[1] - r.potential.values()[0] - 1.0) < 1e-6);
    for (int i = 0; i <= 80; ++i) {
      const double t = -10.0 + 0.25 * i;
      CHECK(std::abs(pressure(s, r.potential, t) - test::softplus(t)) < 1e-8);
    }
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      CHECK(r.objective_history[i] <= r.objective_history[i - 1]);
    }
  }

  TEST_CASE("constant pressure gives the zero potential") {
    const Sft s = full_shift(2);
    const GridFunction flat = GridFunction::uniform(-25.0, 25.0, 101, [](double) { return std::log(2.0); });
    const RealizationResult r = realize_pressure(s, flat, 2, 1e-10);
    CHECK(r.pressure_error < 1e-10);
    CHECK(r.potential.sup_norm() < 1e-10);

    const CmsFunction point{GridFunction::point(0.0, std::log(2.0)), 0, std::log(2.0)};
    const RealizationResult p = realize_spectrum(s, point, 1, 1e-10);
    CHECK(p.target_error < 1e-10);
    CHECK(p.converged);
  }

  TEST_CASE("hypothesis checks") {
    const Sft s = full_shift(2);
    const GridFunction shifted = GridFunction::uniform(-25.0, 25.0, 501, [](double t) { return test::softplus(t) + 0.5; });
    CHECK(kind_of([&] { realize_pressure(s, shifted, 1, 1e-4); }) == ErrorKind::kHypothesisViolation);
    const GridFunction concave = GridFunction::uniform(-5.0, 5.0, 101, [](double t) { return std::log(2.0) - t * t; });
    CHECK(kind_of([&] { realize_pressure(s, concave, 1, 1e-4); }) == ErrorKind::kHypothesisViolation);
    const GridFunction kink = GridFunction::uniform(-5.0, 5.0, 101, [](double t) { return std::log(2.0) + std::abs(t) / 3.0; });
    CHECK(kind_of([&] { realize_pressure(s, kink, 1, 1e-4); }) == ErrorKind::kHypothesisViolation);
    // Intercept below zero: F(t) = log 2 + t^2 has tangent intercepts log 2 - t^2.
    const GridFunction steep = GridFunction::uniform(-5.0, 5.0, 101, [](double t) { return std::log(2.0) + t * t; });
    CHECK(kind_of([&] { realize_pressure(s, steep, 1, 1e-4); }) == ErrorKind::kHypothesisViolation);
    RealizeOptions narrow;
    narrow.t_eval = {-30.0, 0.0, 1.0};
    CHECK(kind_of([&] { realize_pressure(s, logistic_target(), 1, 1e-4, narrow); }) == ErrorKind::kInvalidArgument);

    const GridFunction low = GridFunction::uniform(0.0, 1.0, 101, [](double a) { return 0.5 * test::binary_entropy(a); });
    const CmsFunction h{low, 50, 0.5 * std::log(2.0)};
    CHECK(kind_of([&] { realize_spectrum(s, h, 1, 1e-4); }) == ErrorKind::kMaxEntropyMismatch);
  }

  TEST_CASE("binary entropy spectrum") {
    const Sft s = full_shift(2);
    const CmsFunction h = validate_cms(GridFunction::uniform(0.0, 1.0, 201, test::binary_entropy), std::log(2.0), 1e-9);
    const RealizationResult r = realize_spectrum(s, h, 1, 1e-4);
    CHECK(r.converged);
    CHECK(r.target_error < 1e-4);
    REQUIRE(r.rotation.has_value());
    CHECK(std::abs(r.rotation->alpha_min) < 1e-3);
    CHECK(std::abs(r.rotation->alpha_max - 1.0) < 1e-3);
    REQUIRE(r.spectrum.has_value());
    CHECK(std::abs(spectrum_distance(*r.spectrum, entropy_spectrum(s, r.potential, 201)) - 0.0) < 1e-3);

    const RealizationResult again = realize_spectrum(s, h, 1, 1e-4);
    CHECK(again.potential.values() == r.potential.values());
    CHECK(again.target_error == r.target_error);
    CHECK(again.objective_history == r.objective_history);
  }

  TEST_CASE("cohomology witnesses") {
    const Sft s = full_shift(2);
    const Potential x0 = test::first_symbol(s);
    const auto w = cohomology_witness(x0, Potential::constant(s, 1, 0.0), 6);
    REQUIRE(w.has_value());
    CHECK(word_to_string(w->orbit1.word()) == "0");
    CHECK(word_to_string(w->orbit2.word()) == "1");
    CHECK(w->avg1 == 0.0);
    CHECK(w->avg2 == 1.0);

    CHECK_FALSE(cohomology_witness(x0, x0.plus_constant(5.0), 12).has_value());
    CHECK_FALSE(cohomology_witness(test::minus_eleven(s), test::minus_eleven(s).composed_with_shift(), 12).has_value());
    const Potential shifted = x0.composed_with_shift();
    CHECK_FALSE(cohomology_witness(x0, shifted, 12).has_value());
    CHECK(kind_of([&] { cohomology_witness(x0, test::first_symbol(golden_mean_shift()), 4); }) == ErrorKind::kSftMismatch);
    CHECK(kind_of([&] { cohomology_witness(x0, x0, 17); }) == ErrorKind::kPeriodTooLarge);

    const auto far = cohomology_witness(test::minus_eleven(s), Potential::constant(s, 2, 0.0), 4);
    REQUIRE(far.has_value());
    CHECK(std::abs(far->avg1 - far->avg2) > 1e-6);
    const Potential diff = test::minus_eleven(s);
    CHECK(birkhoff_average(diff, far->orbit1) == far->avg1);
    CHECK(birkhoff_average(diff, far->orbit2) == far->avg2);
  }

  TEST_CASE("many realizations") {
    const Sft s = full_shift(2);
    const CmsFunction h = validate_cms(GridFunction::uniform(0.0, 1.0, 201, test::binary_entropy), std::log(2.0), 1e-9);
    const ManyRealization one = realize_many(s, h, 1, 1, 1e-4);
    CHECK(one.results.size() == 1);
    CHECK(one.pairs.empty());
    CHECK(one.unresolved == 0);
    CHECK(kind_of([&] { realize_many(s, h, 1, 0, 1e-4); }) == ErrorKind::kInvalidArgument);
  }
}
