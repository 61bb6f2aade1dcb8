// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: acceptance MFS_EXECUTABLE DATA_DIR SCRATCH_DIR

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mfs/cli.hpp"
#include "mfs/convex.hpp"
#include "mfs/oracle.hpp"
#include "mfs/paths.hpp"
#include "mfs/realize.hpp"
#include "mfs/rng.hpp"
#include "mfs/spectra.hpp"
#include "mfs/thermo.hpp"
#include "support.hpp"

using namespace mfs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Paths {
  fs::path executable;
  fs::path data;
  fs::path scratch;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Values k/8 keep every orbit sum exact, so cycle means compare bit for bit.
Potential dyadic_potential(const Sft& sft, int depth, CounterRng& rng) {
  return Potential::from_function(sft, depth, [&](std::span<const Symbol>) { return std::floor(rng.uniform(-16.0, 17.0)) / 8.0; });
}

Potential moderate_potential(const Sft& sft, CounterRng& rng) {
  return Potential::from_function(sft, 2, [&](std::span<const Symbol>) { return rng.uniform(-0.5, 0.5); });
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> out{0.0};
  for (int i = 0; i < points; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  return out;
}

void closed_form_pressure(Outcome& out) {
  const Sft s = full_shift(2);
  const Potential x0 = test::first_symbol(s);
  double worst = 0.0;
  for (int i = 0; i < 81; ++i) {
    const double t = -10.0 + 0.25 * i;
    worst = std::max(worst, std::abs(pressure(s, x0, t) - test::softplus(t)));
  }
  out.detail << "max error " << sci(worst);
  out.require(worst < 1e-10, "error < 1e-10");
}

void closed_form_spectrum(Outcome& out) {
  const Sft s = full_shift(2);
  const SpectrumGraph g = entropy_spectrum(s, test::first_symbol(s), 201);
  double worst = 0.0;
  for (int i = 0; i <= 180; ++i) {
    const double a = 0.05 + 0.005 * i;
    worst = std::max(worst, std::abs(g.entropy_at(a) - test::binary_entropy(a)));
  }
  out.detail << "sup error " << sci(worst) << ", endpoints " << g[0].entropy << " and " << g[g.size() - 1].entropy;
  out.require(worst < 1e-6, "error < 1e-6");
  out.require(g[0].entropy == 0.0 && g[g.size() - 1].entropy == 0.0, "endpoints exactly 0");
}

void golden_entropy(Outcome& out) {
  const double err = std::abs(topological_entropy(golden_mean_shift()) - std::log(test::golden_ratio()));
  out.detail << "error " << sci(err);
  out.require(err <= 1e-12, "error <= 1e-12");
}

void fenchel_moreau(Outcome& out) {
  const double err = fenchel_roundtrip_error(GridFunction::uniform(-10.0, 10.0, 2001, test::softplus));
  out.detail << "roundtrip error " << sci(err);
  out.require(err < 1e-4, "error < 1e-4");
}

void rotation_exactness(Outcome& out) {
  CounterRng rng(5, 5);
  const Sft s2 = full_shift(2);
  const Sft g = golden_mean_shift();
  const Sft s3 = test::three_symbol_sft();
  const std::vector<std::pair<Sft, Potential>> cases{{s2, test::first_symbol(s2)},
                                                     {s2, test::minus_eleven(s2)},
                                                     {g, dyadic_potential(g, 2, rng)},
                                                     {s3, dyadic_potential(s3, 1, rng)},
                                                     {s3, dyadic_potential(s3, 3, rng)}};
  int exact = 0;
  for (const auto& [sft, phi] : cases) {
    const RotationInterval r = rotation_set(sft, phi);
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const PeriodicOrbit& o : enumerate_orbits(sft, 12).all()) {
      const double avg = birkhoff_average(phi, o);
      lo = std::min(lo, avg);
      hi = std::max(hi, avg);
    }
    if (lo == r.alpha_min && hi == r.alpha_max) ++exact;
  }
  out.detail << exact << "/" << cases.size() << " potentials exact";
  out.require(exact == static_cast<int>(cases.size()), "all bounds equal catalog extremes");
}

void gradient_check(Outcome& out) {
  const double h = 1e-5;
  CounterRng rng(33, 1);
  double worst = 0.0;
  for (const Sft& sft : {full_shift(2), golden_mean_shift(), test::three_symbol_sft()}) {
    const Potential phi = moderate_potential(sft, rng);
    for (double t : {-1.0, 0.5, 2.0}) {
      const auto grad = pressure_gradient(sft, phi, t);
      const Potential psi = phi.scaled(t);
      for (std::size_t w = 0; w < grad.size(); ++w) {
        auto up = psi.values();
        auto down = psi.values();
        up[w] += h;
        down[w] -= h;
        const double fd = (pressure(sft, psi.with_values(up), 1.0) - pressure(sft, psi.with_values(down), 1.0)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - grad[w]) / grad[w]);
      }
    }
  }
  out.detail << "worst relative error " << sci(worst);
  out.require(worst < 1e-6, "relative error < 1e-6");
}

void path_claims(Outcome& out) {
  const Sft g = golden_mean_shift();
  const Path path = single_sided_path(g, PeriodicOrbit(g, word_from_string("0")), 3, log_grid(1e-3, 1e3, 61));
  const double htop = topological_entropy(g);
  const double top = rotation_set(g, path.potential).alpha_max;
  double monotone = INFINITY;
  double gap_low = INFINITY;
  double gap_high = -INFINITY;
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    const PathSample& p = path.samples[i];
    if (i > 0) {
      const PathSample& q = path.samples[i - 1];
      monotone = std::min({monotone, p.integral - q.integral, q.entropy - p.entropy});
    }
    const double gap = top - p.integral;
    gap_low = std::min(gap_low, gap);
    if (p.s > 0.0) gap_high = std::max(gap_high, gap - htop / p.s);
  }
  const bool single = verify_path_claims(path.samples, claim_context(g, path, true)).all_pass();
  out.require(monotone >= -1e-9, "monotone slack >= -1e-9");
  out.require(gap_low >= 0.0 && gap_high <= 0.0, "0 <= M - integral <= h_top/s");
  out.require(single, "single-sided claim report");

  const Sft s = full_shift(2);
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(-1.0 + i / 100.0);
  const Path two = two_sided_path(s, PeriodicOrbit(s, word_from_string("0")), PeriodicOrbit(s, word_from_string("1")), 2, grid);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < two.samples.size(); ++i) {
    if (two.samples[i].entropy > two.samples[peak].entropy) peak = i;
  }
  const double peak_error = std::abs(two.samples[peak].entropy - std::log(2.0));
  const bool two_sided = verify_path_claims(two.samples, claim_context(s, two, false)).all_pass();
  out.require(two.samples[peak].t == 0.0, "peak at t = 0");
  out.require(peak_error <= 1e-9, "peak log 2 within 1e-9");
  out.require(two_sided, "two-sided claim report");
  out.detail << "monotone slack " << sci(monotone) << ", min gap " << sci(gap_low) << ", max gap - h_top/s "
             << sci(gap_high) << ", peak error " << sci(peak_error);
}

double asymmetric_parabola(double a) {
  const double w = a < 0.3 ? 0.3 : 0.7;
  const double u = (a - 0.3) / w;
  return std::log(2.0) * (1.0 - u * u);
}

void realization_recovery(Outcome& out) {
  const Sft s = full_shift(2);
  const RealizationResult r = realize_pressure(s, GridFunction::uniform(-25.0, 25.0, 4001, test::softplus), 1, 1e-8);
  double curve = 0.0;
  for (int i = 0; i < 81; ++i) {
    const double t = -10.0 + 0.25 * i;
    curve = std::max(curve, std::abs(pressure(s, r.potential, t) - test::softplus(t)));
  }
  out.require(r.pressure_error < 1e-8 && curve < 1e-8, "pressure recovered to 1e-8");
  out.detail << "pressure error " << sci(r.pressure_error) << " (curve " << sci(curve) << "), d_ms by depth";

  const CmsFunction h = validate_cms(GridFunction::uniform(0.0, 1.0, 201, asymmetric_parabola), std::log(2.0), 1e-9);
  double previous = INFINITY;
  for (int k = 1; k <= 3; ++k) {
    const double d = realize_spectrum(s, h, k, 1e-4).target_error;
    out.detail << " " << sci(d);
    out.require(d < previous, "d_ms strictly decreasing at depth " + std::to_string(k));
    previous = d;
  }
  out.detail << ", final d_ms " << sci(previous);
}

void usc_mechanism(Outcome& out) {
  const UscDemoReport report = usc_failure_demo(full_shift(2), {0.2, 0.1, 0.05, 0.01});
  out.detail << "delta " << sci(report.delta) << ", e(phi_t, phi)";
  bool certified = true;
  bool decreasing = true;
  double previous = INFINITY;
  for (const UscDemoRow& row : report.rows) {
    if (row.t <= 0.0) continue;
    out.detail << " " << sci(row.excess_upper);
    certified = certified && row.excess_upper >= report.delta - 1e-6;
    decreasing = decreasing && row.excess_lower < previous;
    previous = row.excess_lower;
  }
  out.detail << ", final e(phi, phi_t) " << sci(previous);
  out.require(report.delta > 0.3, "delta > 0.3");
  out.require(certified && report.certified, "upper excess >= delta - 1e-6");
  out.require(decreasing && report.lsc_trend, "lower excess decreasing");
}

void non_cohomology(Outcome& out) {
  const Sft s = full_shift(2);
  const double tol = 1e-4;
  const CmsFunction h = validate_cms(GridFunction::uniform(0.0, 1.0, 201, test::binary_entropy), std::log(2.0), 1e-9);
  const ManyRealization many = realize_many(s, h, 2, 3, tol);
  out.require(many.results.size() == 3, "three realizations");
  out.require(many.pairs.size() == 3 && many.unresolved == 0, "three witnessed pairs");
  double min_gap = INFINITY;
  double max_revalidation = 0.0;
  for (const PairWitness& pair : many.pairs) {
    if (!pair.witness) continue;
    const Potential& a = many.results[static_cast<std::size_t>(pair.i)].potential;
    const Potential& b = many.results[static_cast<std::size_t>(pair.j)].potential;
    const int depth = std::max(a.depth(), b.depth());
    const Potential la = a.lifted(depth);
    const Potential lb = b.lifted(depth);
    std::vector<double> diff(la.size());
    for (std::size_t w = 0; w < diff.size(); ++w) diff[w] = la.values()[w] - lb.values()[w];
    const Potential d = la.with_values(diff);
    max_revalidation = std::max({max_revalidation, std::abs(birkhoff_average(d, pair.witness->orbit1) - pair.witness->avg1),
                                 std::abs(birkhoff_average(d, pair.witness->orbit2) - pair.witness->avg2)});
    min_gap = std::min(min_gap, std::abs(pair.witness->avg1 - pair.witness->avg2));
  }
  double max_pair = 0.0;
  for (std::size_t i = 0; i < many.results.size(); ++i) {
    for (std::size_t j = i + 1; j < many.results.size(); ++j) {
      max_pair = std::max(max_pair, spectrum_distance(*many.results[i].spectrum, *many.results[j].spectrum));
    }
  }
  out.detail << "min witness gap " << sci(min_gap) << ", revalidation error " << sci(max_revalidation)
             << ", max pairwise d_ms " << sci(max_pair);
  out.require(min_gap > 1e-6, "witness gaps > 1e-6");
  out.require(max_revalidation <= 1e-12, "witnesses revalidated");
  out.require(max_pair <= 2.0 * tol, "pairwise d_ms <= 2 tol");
}

void oracle_coherence(Outcome& out) {
  CounterRng rng(12, 1);
  std::vector<std::pair<Sft, Potential>> cases;
  const Sft s2 = full_shift(2);
  // The first-symbol potential is left out: its periodic sums are exact for every n.
  cases.emplace_back(s2, test::minus_eleven(s2));
  for (const Sft& s : {full_shift(2), golden_mean_shift(), test::three_symbol_sft()}) {
    cases.emplace_back(s, Potential::from_function(s, 2, [&](std::span<const Symbol>) { return rng.uniform(-1.0, 1.0); }));
  }
  bool decreasing = true;
  for (const auto& [s, phi] : cases) {
    const double exact = pressure(s, phi, 1.0);
    double previous = INFINITY;
    for (int n : {4, 8, 12}) {
      const double error = std::abs(periodic_pressure(s, phi, 1.0, n) - exact);
      decreasing = decreasing && error < previous;
      previous = error;
    }
  }
  out.require(decreasing, "periodic pressure errors decrease");

  CounterRng draw(5, 0);
  const std::vector<Potential> potentials{test::first_symbol(s2), test::minus_eleven(s2),
                                          Potential::from_function(s2, 2, [&](std::span<const Symbol>) { return draw.uniform(-1.0, 1.0); })};
  double worst = 0.0;
  for (const Potential& phi : potentials) {
    const SpectrumSolver solver(s2, phi);
    const SpectrumGraph estimate = word_count_spectrum(s2, phi, 20, 10);
    for (const SpectrumPoint& p : estimate.points()) {
      const double a = std::clamp(p.alpha, solver.rotation().alpha_min, solver.rotation().alpha_max);
      worst = std::max(worst, std::abs(p.entropy - solver.value(a)));
    }
  }
  out.detail << cases.size() << " potentials with decreasing errors: " << (decreasing ? "yes" : "no")
             << ", word-count deviation " << sci(worst);
  out.require(worst < 0.08, "word-count deviation < 0.08");
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = read_text(entry.path());
  }
  return files;
}

void determinism(Outcome& out, const Paths& paths) {
  const fs::path stage = paths.scratch / "determinism";
  fs::remove_all(stage);
  fs::create_directories(stage);
  fs::copy(paths.data, stage, fs::copy_options::recursive);
  int configs = 0;
  int identical = 0;
  for (const auto& entry : fs::directory_iterator(paths.data)) {
    if (entry.path().extension() != ".json") continue;
    const fs::path config = stage / entry.path().filename();
    const Document doc = Document::load(config);
    if (!doc.has(JsonPointer("/command"))) continue;
    ++configs;
    const fs::path out_dir = stage / doc.string(JsonPointer("/out_dir"));
    std::vector<std::map<std::string, std::string>> runs;
    std::vector<int> codes;
    for (int r = 0; r < 2; ++r) {
      fs::remove_all(out_dir);
      const std::string command = "\"" + paths.executable.string() + "\" --config \"" + config.string() + "\" 2>/dev/null";
      codes.push_back(std::system(command.c_str()));
      runs.push_back(snapshot(out_dir));
    }
    if (codes[0] == codes[1] && !runs[0].empty() && runs[0] == runs[1]) {
      ++identical;
    } else {
      out.detail << " differs: " << entry.path().filename().string();
    }
  }
  out.detail << identical << "/" << configs << " configs byte-identical";
  out.require(configs > 0 && identical == configs, "identical artifacts");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance MFS_EXECUTABLE DATA_DIR SCRATCH_DIR\n";
    return 2;
  }
  const Paths paths{argv[1], argv[2], argv[3]};
  struct Criterion {
    int id;
    std::string name;
    double budget;  // seconds; 0: none
    std::function<void(Outcome&)> check;
  };
  const std::vector<Criterion> criteria{
      {1, "closed-form pressure", 1.0, closed_form_pressure},
      {2, "closed-form spectrum", 5.0, closed_form_spectrum},
      {3, "golden-mean entropy", 0.0, golden_entropy},
      {4, "Fenchel-Moreau roundtrip", 0.0, fenchel_moreau},
      {5, "rotation-set exactness", 0.0, rotation_exactness},
      {6, "pressure gradient", 0.0, gradient_check},
      {7, "path claims", 30.0, path_claims},
      {8, "realization recovery", 300.0, realization_recovery},
      {9, "upper semicontinuity failure", 0.0, usc_mechanism},
      {10, "non-cohomology certificates", 0.0, non_cohomology},
      {11, "oracle coherence", 0.0, oracle_coherence},
      {12, "determinism", 0.0, [&](Outcome& out) { determinism(out, paths); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.check(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double elapsed = seconds_since(start);
    if (c.budget > 0.0) out.require(elapsed < c.budget, "runtime < " + sci(c.budget) + " s");
    if (!out.pass) ++failed;
    std::cout << (out.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << out.detail.str() << " ("
              << sci(elapsed) << " s)" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
