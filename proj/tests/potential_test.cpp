#include <cmath>

#include "doctest.h"
#include "mfs/error.hpp"
#include "mfs/oracle.hpp"
#include "mfs/potential.hpp"
#include "mfs/rng.hpp"
#include "support.hpp"

using namespace mfs;

namespace {

PeriodicOrbit orbit(const Sft& sft, const char* word) { return PeriodicOrbit(sft, word_from_string(word)); }

double table(const Potential& p, const char* word) {
  const Word w = word_from_string(word);
  return p.values()[static_cast<std::size_t>(p.index_of(w))];
}

Potential random_potential(const Sft& sft, int depth, CounterRng& rng) {
  return Potential::from_function(sft, depth, [&](std::span<const Symbol>) { return rng.uniform(-2.0, 2.0); });
}

}  // namespace

TEST_SUITE("potential") {
  TEST_CASE("birkhoff averages") {
    const Sft s = full_shift(2);
    const Potential x0 = test::first_symbol(s);
    CHECK(birkhoff_average(x0, orbit(s, "1")) == 1.0);
    CHECK(birkhoff_average(x0, orbit(s, "01")) == 0.5);
    CHECK(birkhoff_average(test::minus_eleven(s), orbit(s, "1")) == -1.0);
    CHECK(birkhoff_average(test::minus_eleven(s), orbit(s, "011")) == doctest::Approx(-1.0 / 3.0));
  }

  TEST_CASE("periodic orbits") {
    CHECK_THROWS_AS(PeriodicOrbit(word_from_string("0101")), Error);
    CHECK_THROWS_AS(PeriodicOrbit(Word{}), Error);
    try {
      PeriodicOrbit(golden_mean_shift(), word_from_string("1"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kOrbitNotAdmissible);
    }
    const PeriodicOrbit o(word_from_string("110"));
    CHECK(word_to_string(o.canonical().word()) == "011");
    CHECK(o.same_orbit(PeriodicOrbit(word_from_string("101"))));
    CHECK_FALSE(o.same_orbit(PeriodicOrbit(word_from_string("001"))));
  }

  TEST_CASE("orbit distance potential") {
    const Sft s = full_shift(2);
    const Potential d1 = orbit_distance_potential(s, orbit(s, "0"), 1);
    CHECK(table(d1, "0") == -0.5);
    CHECK(table(d1, "1") == -1.0);
    const Potential d3 = orbit_distance_potential(s, orbit(s, "0"), 3);
    CHECK(table(d3, "000") == -0.125);
    CHECK(table(d3, "001") == -0.25);
    CHECK(table(d3, "010") == -0.5);
    CHECK(table(d3, "100") == -1.0);
    const Potential d4 = orbit_distance_potential(s, orbit(s, "01"), 4);
    CHECK(table(d4, "1010") == -1.0 / 16.0);
    CHECK(table(d4, "0100") == -1.0 / 8.0);
    for (const Sft& sft : {full_shift(2), golden_mean_shift(), test::three_symbol_sft()}) {
      for (int k = 1; k <= 5; ++k) {
        const Potential p = orbit_distance_potential(sft, orbit(sft, "0"), k);
        CHECK(p.min() >= -1.0);
        CHECK(p.max() <= -std::ldexp(1.0, -k));
      }
    }
  }

  TEST_CASE("normalized separation potential") {
    const Sft s = full_shift(2);
    const Potential g1 = normalized_separation_potential(s, orbit(s, "0"), orbit(s, "1"), 1);
    CHECK(table(g1, "0") == 1.0);
    CHECK(table(g1, "1") == -1.0);
    const Sft s3 = full_shift(3);
    const Potential g3 = normalized_separation_potential(s3, orbit(s3, "0"), orbit(s3, "1"), 2);
    CHECK(table(g3, "20") == 0.0);
    CHECK(table(g3, "01") == doctest::Approx(1.0 / 3.0));

    const PeriodicOrbit a = orbit(s, "001");
    const PeriodicOrbit b = orbit(s, "1");
    const Potential ab = normalized_separation_potential(s, a, b, 5);
    const Potential ba = normalized_separation_potential(s, b, a, 5);
    for (std::size_t i = 0; i < ab.size(); ++i) {
      CHECK(ab.values()[i] == -ba.values()[i]);
      CHECK(std::abs(ab.values()[i]) <= 1.0);
    }
    for (int shift = 0; shift < a.period(); ++shift) CHECK(ab(a.prefix(shift, 5)) == 1.0);
    CHECK(ab(b.prefix(0, 5)) == -1.0);
    CHECK_THROWS_AS(normalized_separation_potential(s, orbit(s, "01"), orbit(s, "10"), 3), Error);
  }

  TEST_CASE("affine combination") {
    const Sft s = full_shift(2);
    const Potential p(s, 1, {0.0, 2.0});
    const Potential q(s, 1, {2.0, 0.0});
    CHECK(affine_combine(p, q, 0.0).values() == p.values());
    CHECK(affine_combine(p, q, 1.0).values() == q.values());
    CHECK(affine_combine(p, q, 0.5).values() == std::vector<double>{1.0, 1.0});
    CHECK_THROWS_AS(affine_combine(p, test::first_symbol(golden_mean_shift()), 0.5), Error);

    CounterRng rng(5, 2);
    const OrbitCatalog catalog = enumerate_orbits(s, 8);
    for (int trial = 0; trial < 10; ++trial) {
      const Potential u = random_potential(s, 1 + trial % 3, rng);
      const Potential v = random_potential(s, 1 + (trial + 1) % 4, rng);
      const double t = rng.uniform();
      const Potential w = affine_combine(u, v, t);
      CHECK(w.depth() == std::max(u.depth(), v.depth()));
      for (const PeriodicOrbit& o : catalog.all()) {
        const double expected = (1.0 - t) * birkhoff_average(u, o) + t * birkhoff_average(v, o);
        CHECK(std::abs(birkhoff_average(w, o) - expected) < 1e-14);
      }
    }
  }

  TEST_CASE("lifting and shifting preserve periodic averages") {
    const Sft g = golden_mean_shift();
    CounterRng rng(9, 4);
    const Potential p = random_potential(g, 2, rng);
    const OrbitCatalog catalog = enumerate_orbits(g, 7);
    for (const PeriodicOrbit& o : catalog.all()) {
      CHECK(std::abs(birkhoff_average(p.lifted(4), o) - birkhoff_average(p, o)) < 1e-14);
      CHECK(std::abs(birkhoff_average(p.composed_with_shift(), o) - birkhoff_average(p, o)) < 1e-14);
    }
    const Word w = word_from_string("01001");
    CHECK(p.lifted(4)(w) == p(w));
  }

  TEST_CASE("table validation") {
    CHECK_THROWS_AS(Potential(full_shift(2), 1, {1.0}), Error);
    CHECK_THROWS_AS(Potential(full_shift(2), 1, {1.0, NAN}), Error);
  }
}
