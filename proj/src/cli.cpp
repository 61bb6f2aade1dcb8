#include "mfs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "mfs/convex.hpp"
#include "mfs/error.hpp"
#include "mfs/oracle.hpp"
#include "mfs/parallel.hpp"
#include "mfs/paths.hpp"
#include "mfs/realize.hpp"
#include "mfs/spectra.hpp"
#include "mfs/thermo.hpp"

namespace mfs::cli {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kCommands = {"pressure", "spectrum", "path", "realize", "demo-usc", "oracle-check"};

JsonPointer ptr(const std::string& key) { return JsonPointer("/" + key); }

// Non-finite values have no JSON number form.
Json number(double value) {
  if (std::isfinite(value)) return value;
  return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
}

class Context {
 public:
  Context(const RunConfig& config, std::ostream* log) : config_(config), log_(log) {}

  const Document& doc() const { return config_.document; }

  JsonPointer param(const std::string& key) const {
    const JsonPointer nested = ptr("params") / key;
    return doc().has(nested) ? nested : ptr(key);
  }
  bool has(const std::string& key) const { return doc().has(param(key)); }
  double number(const std::string& key, double fallback) const { return doc().number(param(key), fallback); }
  long long integer(const std::string& key, long long fallback) const { return doc().integer(param(key), fallback); }
  long long integer_in(const std::string& key, long long fallback, long long lo, long long hi) const {
    const long long v = integer(key, fallback);
    if (v < lo || v > hi) {
      doc().fail(param(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
  }
  double positive(const std::string& key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0.0)) doc().fail(param(key), "must be positive");
    return v;
  }

  fs::path resolve(const std::string& path) const {
    const fs::path p(path);
    return p.is_absolute() ? p : config_.base_dir / p;
  }

  Sft sft() const {
    const JsonPointer at = param("sft");
    const Json& v = doc().at(at);
    if (v.is_string()) {
      const Document file = Document::load(resolve(v.get<std::string>()));
      return sft_from_json(file, JsonPointer());
    }
    return sft_from_json(doc(), at);
  }

  Potential potential(const Sft& sft) const {
    const JsonPointer at = param("potential");
    const Json& v = doc().at(at);
    if (v.is_string()) {
      const Document file = Document::load(resolve(v.get<std::string>()));
      return potential_from_json(sft, file, JsonPointer());
    }
    return potential_from_json(sft, doc(), at);
  }

  PeriodicOrbit orbit(const Sft& sft, const JsonPointer& at) const {
    const std::string text = doc().string(at);
    try {
      return PeriodicOrbit(sft, word_from_string(text));
    } catch (const Error& e) {
      doc().fail(at, e.what());
    }
  }

  void note(const std::string& line) const {
    if (log_ != nullptr) *log_ << config_.command << ": " << line << "\n";
  }

  std::vector<Artifact>& artifacts() { return artifacts_; }
  void emit(std::string name, std::string content) { artifacts_.push_back({std::move(name), std::move(content)}); }

  std::uint64_t seed() const { return config_.seed; }

 private:
  const RunConfig& config_;
  std::ostream* log_;
  std::vector<Artifact> artifacts_;
};

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n, lo);
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = hi;
  return out;
}

std::vector<double> sorted_grid(const Context& ctx, const std::string& key) {
  std::vector<double> grid = ctx.doc().numbers(ctx.param(key));
  if (grid.empty()) ctx.doc().fail(ctx.param(key), "needs at least one value");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) ctx.doc().fail(ctx.param(key) / i, "values must increase");
  }
  return grid;
}

Json rotation_json(const RotationInterval& r) {
  Json out;
  out["alpha_min"] = number(r.alpha_min);
  out["alpha_max"] = number(r.alpha_max);
  out["argmin_cycle"] = word_to_string(r.argmin_cycle.word());
  out["argmax_cycle"] = word_to_string(r.argmax_cycle.word());
  return out;
}

void run_pressure(Context& ctx) {
  const Sft sft = ctx.sft();
  const Potential phi = ctx.potential(sft);
  std::vector<double> grid;
  if (ctx.has("t")) {
    grid = sorted_grid(ctx, "t");
  } else {
    const double lo = ctx.number("t_min", -10.0);
    const double hi = ctx.number("t_max", 10.0);
    if (!(hi > lo)) ctx.doc().fail(ctx.param("t_max"), "t_max must exceed t_min");
    grid = linear_grid(lo, hi, static_cast<std::size_t>(ctx.integer_in("points", 81, 2, 1000000)));
  }
  const PressureCurve curve = pressure_curve(sft, phi, grid);
  ctx.note(std::to_string(grid.size()) + " pressure samples");
  ctx.emit("pressure.csv", pressure_csv(curve));
  Json report;
  report["command"] = "pressure";
  report["topological_entropy"] = number(topological_entropy(sft));
  report["rotation"] = rotation_json(rotation_set(sft, phi));
  report["samples"] = grid.size();
  ctx.emit("report.json", dump_json(report));
}

void run_spectrum(Context& ctx) {
  const Sft sft = ctx.sft();
  const Potential phi = ctx.potential(sft);
  const auto n_alpha = static_cast<std::size_t>(ctx.integer_in("n_alpha", 201, 3, 1000000));
  const double t_max = ctx.positive("t_max", SpectrumSolver::kDefaultTMax);
  const SpectrumSolver solver(sft, phi, t_max);
  const SpectrumGraph graph = solver.graph(n_alpha);
  ctx.note(std::to_string(graph.size()) + " spectrum samples");
  ctx.emit("spectrum.csv", spectrum_csv(graph));
  Json report;
  report["command"] = "spectrum";
  report["topological_entropy"] = number(solver.topological_entropy());
  report["rotation"] = rotation_json(solver.rotation());
  report["max_entropy_alpha"] = number(solver.max_entropy_alpha());
  report["entropy_at_alpha_min"] = number(graph.points().front().entropy);
  report["entropy_at_alpha_max"] = number(graph.points().back().entropy);
  report["degenerate"] = solver.degenerate();
  report["concave"] = graph.is_concave();
  ctx.emit("report.json", dump_json(report));
}

void run_path(Context& ctx) {
  const Sft sft = ctx.sft();
  const std::string kind = ctx.doc().string(ctx.param("kind"), "single");
  const int depth = static_cast<int>(ctx.integer_in("depth", 3, 1, 16));
  Path path = [&] {
    if (kind == "single") {
      const PeriodicOrbit orbit = ctx.orbit(sft, ctx.param("orbit"));
      std::vector<double> grid;
      if (ctx.has("s")) {
        grid = sorted_grid(ctx, "s");
      } else {
        const double s_max = ctx.positive("s_max", 1000.0);
        const double s_min = ctx.positive("s_min", 1e-3);
        if (!(s_max > s_min)) ctx.doc().fail(ctx.param("s_max"), "s_max must exceed s_min");
        const auto points = static_cast<std::size_t>(ctx.integer_in("points", 61, 3, 1000000));
        grid.push_back(0.0);
        for (double e : linear_grid(std::log10(s_min), std::log10(s_max), points - 1)) grid.push_back(std::pow(10.0, e));
        grid.back() = s_max;
      }
      try {
        return single_sided_path(sft, orbit, depth, grid);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kInvalidArgument) throw;
        ctx.doc().fail(ctx.param("s"), e.what());
      }
    }
    if (kind == "two-sided") {
      const PeriodicOrbit a = ctx.orbit(sft, ctx.param("orbits") / 0);
      const PeriodicOrbit b = ctx.orbit(sft, ctx.param("orbits") / 1);
      std::vector<double> grid;
      if (ctx.has("t")) {
        grid = sorted_grid(ctx, "t");
        if (grid.front() < -1.0 || grid.back() > 1.0) ctx.doc().fail(ctx.param("t"), "values must lie in [-1, 1]");
      } else {
        grid = linear_grid(-1.0, 1.0, static_cast<std::size_t>(ctx.integer_in("points", 201, 3, 1000000)));
      }
      try {
        return two_sided_path(sft, a, b, depth, grid);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kOrbitsIntersect) throw;
        ctx.doc().fail(ctx.param("orbits"), e.what());
      }
    }
    ctx.doc().fail(ctx.param("kind"), "expected \"single\" or \"two-sided\"");
  }();
  const bool strict = ctx.doc().boolean(ctx.param("strict"), kind == "single");
  const ClaimReport claims = verify_path_claims(path.samples, claim_context(sft, path, strict));
  ctx.note(std::to_string(path.samples.size()) + " path samples, claims " + (claims.all_pass() ? "pass" : "fail"));
  ctx.emit("path.csv", path_csv(path));
  ctx.emit("potential.json", dump_json(potential_to_json(path.potential)));
  Json report;
  report["command"] = "path";
  report["kind"] = kind;
  report["all_pass"] = claims.all_pass();
  report["continuity_modulus"] = number(claims.continuity_modulus);
  Json rows = Json::array();
  for (const ClaimResult& c : claims.claims) {
    Json row;
    row["id"] = c.id;
    row["pass"] = c.pass;
    row["worst_slack"] = number(c.worst_slack);
    row["witness_index"] = c.witness_index;
    rows.push_back(std::move(row));
  }
  report["claims"] = std::move(rows);
  ctx.emit("claims.json", dump_json(report));
}

std::string error_row(std::size_t index, const RealizationResult& r) {
  return std::to_string(index) + "," + format_number(r.target_error) + "," + format_number(r.pressure_error) + "," +
         std::to_string(r.iterations) + "," + (r.converged ? "1" : "0") + "," + std::to_string(r.start_index) + "\n";
}

const char* const kErrorHeader = "index,target_error,pressure_error,iterations,converged,start_index\n";
const char* const kWitnessHeader = "i,j,orbit1,orbit2,avg1,avg2\n";

std::string history_csv(const RealizationResult& r) {
  std::string out = "iteration,objective\n";
  for (std::size_t i = 0; i < r.objective_history.size(); ++i) {
    out += std::to_string(i + 1) + "," + format_number(r.objective_history[i]) + "\n";
  }
  return out;
}

void run_realize(Context& ctx) {
  const Sft sft = ctx.sft();
  const JsonPointer kind_at = ctx.param("target") / "kind";
  const JsonPointer csv_at = ctx.param("target") / "csv";
  const std::string kind = ctx.doc().string(kind_at);
  if (kind != "pressure" && kind != "spectrum") ctx.doc().fail(kind_at, "expected \"pressure\" or \"spectrum\"");
  const std::string csv_name = ctx.doc().string(csv_at);
  std::string text;
  try {
    text = read_text(ctx.resolve(csv_name));
  } catch (const Error&) {
    ctx.doc().fail(csv_at, "cannot read " + ctx.resolve(csv_name).string());
  }
  const std::string source = ctx.resolve(csv_name).string();
  GridFunction target = [&] {
    const CsvTable table = parse_csv(text, source);
    try {
      return grid_from_csv(table, source);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kConfigInvalid) throw;
      throw Error(ErrorKind::kConfigInvalid, source + ":1: " + e.what());
    }
  }();

  const int depth = static_cast<int>(ctx.integer_in("depth", 1, 1, 12));
  const int n = static_cast<int>(ctx.integer_in("N", 1, 1, 64));
  const double tol = ctx.positive("tol", 1e-4);
  RealizeOptions options;
  options.seed = ctx.seed();
  options.starts = static_cast<int>(ctx.integer_in("starts", options.starts, 1, 1000));
  options.max_iterations = static_cast<int>(ctx.integer_in("max_iterations", options.max_iterations, 1, 1000000));
  if (ctx.has("t_eval")) options.t_eval = sorted_grid(ctx, "t_eval");

  std::vector<RealizationResult> results;
  std::vector<PairWitness> pairs;
  if (kind == "pressure") {
    if (n != 1) ctx.doc().fail(ctx.param("N"), "pressure targets take N = 1");
    results.push_back(realize_pressure(sft, target, depth, tol, options));
  } else {
    const CmsFunction h = validate_cms(target, topological_entropy(sft), tol);
    if (n == 1) {
      results.push_back(realize_spectrum(sft, h, depth, tol, options));
    } else {
      ManyRealization many = realize_many(sft, h, depth, n, tol, options);
      results = std::move(many.results);
      pairs = std::move(many.pairs);
    }
  }

  std::string errors = kErrorHeader;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RealizationResult& r = results[i];
    ctx.note("result " + std::to_string(i) + " target error " + format_number(r.target_error));
    errors += error_row(i, r);
    const std::string suffix = results.size() == 1 ? "" : "_" + std::to_string(i);
    ctx.emit("potential" + suffix + ".json", dump_json(potential_to_json(r.potential)));
    ctx.emit("history" + suffix + ".csv", history_csv(r));
    if (r.spectrum) ctx.emit("spectrum" + suffix + ".csv", spectrum_csv(*r.spectrum));
    if (kind == "pressure") {
      const std::vector<double> t_eval = options.t_eval.empty() ? default_t_eval() : options.t_eval;
      std::string fit = "t,target,realized\n";
      for (double t : t_eval) {
        fit += format_number(t) + "," + format_number(target(t)) + "," + format_number(pressure(sft, r.potential, t)) +
               "\n";
      }
      ctx.emit("fit.csv", fit);
    }
  }
  ctx.emit("error.csv", errors);

  std::string witnesses = kWitnessHeader;
  for (const PairWitness& p : pairs) {
    witnesses += std::to_string(p.i) + "," + std::to_string(p.j) + ",";
    if (p.witness) {
      witnesses += word_to_string(p.witness->orbit1.word()) + "," + word_to_string(p.witness->orbit2.word()) + "," +
                   format_number(p.witness->avg1) + "," + format_number(p.witness->avg2) + "\n";
    } else {
      witnesses += ",,,\n";
    }
  }
  ctx.emit("witnesses.csv", witnesses);
}

void run_demo_usc(Context& ctx) {
  const Sft sft = ctx.has("sft") ? ctx.sft() : full_shift(2);
  std::vector<double> t_list = {0.2, 0.1, 0.05, 0.01};
  if (ctx.has("t_list")) {
    t_list = ctx.doc().numbers(ctx.param("t_list"));
    for (std::size_t i = 0; i < t_list.size(); ++i) {
      if (t_list[i] < 0.0 || t_list[i] > 1.0) ctx.doc().fail(ctx.param("t_list") / i, "must lie in [0, 1]");
    }
  }
  const auto n_alpha = static_cast<std::size_t>(ctx.integer_in("n_alpha", 401, 3, 1000000));
  UscDemoReport demo = [&] {
    try {
      return usc_failure_demo(sft, t_list, n_alpha);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInvalidArgument) throw;
      ctx.doc().fail(ctx.param("sft"), e.what());
    }
  }();
  ctx.note("delta " + format_number(demo.delta) + (demo.certified ? ", certified" : ", not certified"));
  ctx.emit("base_spectrum.csv", spectrum_csv(demo.base_graph));
  Json report;
  report["command"] = "demo-usc";
  report["delta"] = number(demo.delta);
  report["certified"] = demo.certified;
  report["lsc_trend"] = demo.lsc_trend;
  Json rows = Json::array();
  for (std::size_t i = 0; i < demo.rows.size(); ++i) {
    const UscDemoRow& r = demo.rows[i];
    Json row;
    row["t"] = number(r.t);
    row["excess_upper"] = number(r.excess_upper);
    row["excess_lower"] = number(r.excess_lower);
    row["delta"] = number(r.delta);
    rows.push_back(std::move(row));
    ctx.emit("spectrum_" + std::to_string(i) + ".csv", spectrum_csv(r.graph));
  }
  report["rows"] = std::move(rows);
  ctx.emit("report.json", dump_json(report));
}

void run_oracle_check(Context& ctx) {
  const Sft sft = ctx.sft();
  const Potential phi = ctx.potential(sft);
  const int max_period = static_cast<int>(ctx.integer_in("max_period", 12, 1, kMaxCatalogPeriod));
  std::vector<int> periods = {4, 8, 12};
  if (ctx.has("periods")) {
    periods.clear();
    const std::vector<double> raw = ctx.doc().numbers(ctx.param("periods"));
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const JsonPointer at = ctx.param("periods") / i;
      if (raw[i] != std::floor(raw[i]) || raw[i] < 1 || raw[i] > kMaxCatalogPeriod) {
        ctx.doc().fail(at, "periods must be integers in [1, " + std::to_string(kMaxCatalogPeriod) + "]");
      }
      periods.push_back(static_cast<int>(raw[i]));
    }
  }
  const double t = ctx.number("t", 1.0);
  const int word_length = static_cast<int>(ctx.integer_in("word_length", 20, 1, 64));
  if (static_cast<double>(word_length) * std::log2(static_cast<double>(sft.alphabet_size())) > 24.0) {
    ctx.doc().fail(ctx.param("word_length"), "alphabet_size^word_length exceeds 2^24");
  }
  const int bins = static_cast<int>(ctx.integer_in("bins", 10, 1, 100000));
  const auto n_alpha = static_cast<std::size_t>(ctx.integer_in("n_alpha", 201, 3, 1000000));

  const OrbitCatalog catalog = enumerate_orbits(sft, max_period);
  std::string catalog_table = "period,word,average\n";
  double catalog_min = std::numeric_limits<double>::infinity();
  double catalog_max = -std::numeric_limits<double>::infinity();
  for (const PeriodicOrbit& orbit : catalog.all()) {
    const double avg = birkhoff_average(phi, orbit);
    catalog_min = std::min(catalog_min, avg);
    catalog_max = std::max(catalog_max, avg);
    catalog_table += std::to_string(orbit.period()) + "," + word_to_string(orbit.word()) + "," + format_number(avg) + "\n";
  }
  ctx.emit("catalog.csv", catalog_table);

  const std::vector<std::uint64_t> traces = periodic_point_counts(sft, max_period);
  const std::vector<std::uint64_t> counted = catalog_point_counts(catalog);
  std::string counts = "n,trace,catalog\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    counts += std::to_string(i + 1) + "," + std::to_string(traces[i]) + "," + std::to_string(counted[i]) + "\n";
  }
  ctx.emit("point_counts.csv", counts);

  const double exact = pressure(sft, phi, t);
  std::string periodic = "n,periodic_pressure,pressure,error\n";
  Json errors = Json::array();
  bool decreasing = true;
  double previous = std::numeric_limits<double>::infinity();
  for (int n : periods) {
    const double estimate = periodic_pressure(sft, phi, t, n);
    const double error = std::abs(estimate - exact);
    decreasing = decreasing && error < previous;
    previous = error;
    errors.push_back(number(error));
    periodic += std::to_string(n) + "," + format_number(estimate) + "," + format_number(exact) + "," +
                format_number(error) + "\n";
  }
  ctx.emit("periodic_pressure.csv", periodic);

  const SpectrumGraph counted_spectrum = word_count_spectrum(sft, phi, word_length, bins);
  const SpectrumGraph spectrum = entropy_spectrum(sft, phi, n_alpha);
  double deviation = 0.0;
  for (const SpectrumPoint& p : counted_spectrum.points()) {
    const double a = std::clamp(p.alpha, spectrum.alpha_min(), spectrum.alpha_max());
    deviation = std::max(deviation, std::abs(p.entropy - spectrum.entropy_at(a)));
  }
  ctx.emit("word_count.csv", spectrum_csv(counted_spectrum));
  ctx.emit("spectrum.csv", spectrum_csv(spectrum));

  const RotationInterval rotation = rotation_set(sft, phi);
  Json report;
  report["command"] = "oracle-check";
  report["rotation"] = rotation_json(rotation);
  report["catalog_alpha_min"] = number(catalog_min);
  report["catalog_alpha_max"] = number(catalog_max);
  report["rotation_matches_catalog"] = rotation.alpha_min == catalog_min && rotation.alpha_max == catalog_max;
  report["point_counts_match"] = traces == counted;
  report["periodic_pressure_errors"] = std::move(errors);
  report["periodic_pressure_decreasing"] = decreasing;
  report["word_count_deviation"] = number(deviation);
  ctx.note("word-count deviation " + format_number(deviation));
  ctx.emit("report.json", dump_json(report));
}

bool is_hypothesis_kind(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kHypothesisViolation:
    case ErrorKind::kMaxEntropyMismatch:
    case ErrorKind::kNotPrimitive:
    case ErrorKind::kNotConvex:
    case ErrorKind::kNotConcave:
    case ErrorKind::kSlopesNotStabilized:
    case ErrorKind::kMaxMismatch:
    case ErrorKind::kNonUniqueMaximizer:
    case ErrorKind::kNegativeValues:
      return true;
    default:
      return false;
  }
}

Json violation_json(const std::exception& error) {
  Json out;
  if (const auto* v = dynamic_cast<const HypothesisViolation*>(&error)) {
    out["hypothesis"] = v->hypothesis();
    out["measured"] = number(v->measured());
    out["tolerance"] = number(v->tolerance());
  } else if (const auto* e = dynamic_cast<const Error*>(&error)) {
    out["hypothesis"] = std::string(to_string(e->kind()));
  }
  out["message"] = error.what();
  return out;
}

}  // namespace

RunConfig load_config(const fs::path& path) {
  Document doc = Document::load(path);
  if (!doc.root().is_object()) doc.fail(JsonPointer(), "expected an object");
  const std::string command = doc.string(ptr("command"));
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    doc.fail(ptr("command"), "unknown command '" + command + "'");
  }
  if (doc.has(ptr("params")) && !doc.at(ptr("params")).is_object()) doc.fail(ptr("params"), "expected an object");
  const long long seed = doc.integer(ptr("seed"), 7);
  if (seed < 0) doc.fail(ptr("seed"), "must be nonnegative");
  const fs::path base = fs::absolute(path).parent_path();
  const fs::path out(doc.string(ptr("out_dir")));
  RunConfig config{command, std::move(doc), base, out.is_absolute() ? out : base / out,
                   static_cast<std::uint64_t>(seed)};
  return config;
}

std::vector<Artifact> run(const RunConfig& config, std::ostream* log) {
  Context ctx(config, log);
  if (config.command == "pressure") {
    run_pressure(ctx);
  } else if (config.command == "spectrum") {
    run_spectrum(ctx);
  } else if (config.command == "path") {
    run_path(ctx);
  } else if (config.command == "realize") {
    run_realize(ctx);
  } else if (config.command == "demo-usc") {
    run_demo_usc(ctx);
  } else {
    run_oracle_check(ctx);
  }
  return std::move(ctx.artifacts());
}

void write_artifacts(const fs::path& out_dir, const std::vector<Artifact>& artifacts) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  std::map<std::string, std::string> hashes;
  for (const Artifact& a : artifacts) {
    write_text(out_dir / a.name, a.content);
    hashes[a.name] = sha256_hex(a.content);
  }
  std::string manifest;
  for (const auto& [name, hash] : hashes) manifest += hash + "  " + name + "\n";
  write_text(out_dir / "manifest.txt", manifest);
}

int exit_code_for(const std::exception& error) {
  const auto* e = dynamic_cast<const Error*>(&error);
  if (e == nullptr) return kExitInternalError;
  if (e->kind() == ErrorKind::kConfigInvalid) return kExitConfigInvalid;
  if (is_hypothesis_kind(e->kind())) return kExitHypothesisViolation;
  return kExitInternalError;
}

int main(int argc, char** argv) {
  CLI::App app{"Entropy spectra, pressure and realization on subshifts of finite type"};
  std::string config_path;
  int threads = 0;
  bool verbose = false;
  app.add_option("--config", config_path, "Run configuration document")->required();
  app.add_option("--threads", threads, "Worker threads (default: hardware count)")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "Progress on standard error");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigInvalid;
  }
  if (threads > 0) set_thread_count(threads);

  std::optional<RunConfig> config;
  try {
    config.emplace(load_config(config_path));
    const std::vector<Artifact> artifacts = run(*config, verbose ? &std::cerr : nullptr);
    write_artifacts(config->out_dir, artifacts);
    if (verbose) std::cerr << config->command << ": wrote " << artifacts.size() << " artifacts\n";
    return kExitSuccess;
  } catch (const std::exception& error) {
    const int code = exit_code_for(error);
    std::cerr << "error: " << error.what() << "\n";
    if (code == kExitHypothesisViolation && config) {
      try {
        write_artifacts(config->out_dir, {{"violation.json", dump_json(violation_json(error))}});
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
      }
    }
    return code;
  }
}

}  // namespace mfs::cli
