#include "mfs/potential.hpp"

#include <algorithm>
#include <cmath>

#include "mfs/error.hpp"

namespace mfs {

namespace {

std::shared_ptr<const WordIndex> make_index(const Sft& sft, int depth) {
  if (depth <= 0) throw Error(ErrorKind::kInvalidArgument, "potential depth must be positive");
  return std::make_shared<const WordIndex>(sft, depth);
}

void require_admissible(const Sft& sft, const PeriodicOrbit& orbit) {
  if (!is_cyclically_admissible(sft, orbit.word())) {
    throw Error(ErrorKind::kOrbitNotAdmissible, "orbit " + word_to_string(orbit.word()) + " is not admissible");
  }
}

// Longest common prefix of w with any orbit point, capped at w.size().
int longest_orbit_prefix(const Word& w, const PeriodicOrbit& orbit) {
  int best = 0;
  for (int shift = 0; shift < orbit.period(); ++shift) {
    int j = 0;
    while (j < static_cast<int>(w.size()) && w[j] == orbit.symbol(shift, j)) ++j;
    best = std::max(best, j);
  }
  return best;
}

}  // namespace

Potential::Potential(Sft sft, int depth, std::vector<double> values)
    : sft_(std::move(sft)), depth_(depth), index_(make_index(sft_, depth)), values_(std::move(values)) {
  if (values_.size() != index_->size()) {
    throw Error(ErrorKind::kInvalidArgument, "potential table has " + std::to_string(values_.size()) +
                                                 " entries, expected " + std::to_string(index_->size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidArgument, "potential values must be finite");
  }
}

Potential Potential::from_function(const Sft& sft, int depth,
                                   const std::function<double(std::span<const Symbol>)>& f) {
  const auto words = admissible_words(sft, depth);
  std::vector<double> values;
  values.reserve(words.size());
  for (const auto& w : words) values.push_back(f(w));
  return Potential(sft, depth, std::move(values));
}

Potential Potential::constant(const Sft& sft, int depth, double value) {
  return from_function(sft, depth, [value](std::span<const Symbol>) { return value; });
}

double Potential::operator()(std::span<const Symbol> sequence) const {
  if (static_cast<int>(sequence.size()) < depth_) {
    throw Error(ErrorKind::kInvalidArgument, "potential needs at least depth symbols");
  }
  const int i = index_->find(sequence.first(static_cast<std::size_t>(depth_)));
  if (i < 0) throw Error(ErrorKind::kInvalidArgument, "inadmissible word " + word_to_string(sequence));
  return values_[static_cast<std::size_t>(i)];
}

double Potential::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Potential::max() const { return *std::max_element(values_.begin(), values_.end()); }
double Potential::sup_norm() const { return std::max(std::abs(min()), std::abs(max())); }

Potential Potential::lifted(int depth) const {
  if (depth < depth_) throw Error(ErrorKind::kInvalidArgument, "cannot lift a potential to a smaller depth");
  if (depth == depth_) return *this;
  return from_function(sft_, depth, [this](std::span<const Symbol> w) { return (*this)(w); });
}

Potential Potential::scaled(double factor) const {
  auto v = values_;
  for (auto& x : v) x *= factor;
  return with_values(std::move(v));
}

Potential Potential::plus_constant(double c) const {
  auto v = values_;
  for (auto& x : v) x += c;
  return with_values(std::move(v));
}

Potential Potential::composed_with_shift() const {
  return from_function(sft_, depth_ + 1, [this](std::span<const Symbol> w) { return (*this)(w.subspan(1)); });
}

Potential Potential::with_values(std::vector<double> values) const {
  Potential out = *this;
  if (values.size() != values_.size()) throw Error(ErrorKind::kInvalidArgument, "table size mismatch");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidArgument, "potential values must be finite");
  }
  out.values_ = std::move(values);
  return out;
}

PeriodicOrbit::PeriodicOrbit(Word word) : word_(std::move(word)) {
  if (word_.empty()) throw Error(ErrorKind::kInvalidArgument, "periodic orbit needs a nonempty word");
  const int p = period();
  for (int d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    bool repeats = true;
    for (int i = d; i < p && repeats; ++i) repeats = word_[i] == word_[i - d];
    if (repeats) {
      throw Error(ErrorKind::kInvalidArgument, "orbit word " + word_to_string(word_) + " is not primitive");
    }
  }
}

PeriodicOrbit::PeriodicOrbit(const Sft& sft, Word word) : PeriodicOrbit(std::move(word)) {
  require_admissible(sft, *this);
}

Word PeriodicOrbit::prefix(int shift, int n) const {
  Word out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = symbol(shift, i);
  return out;
}

PeriodicOrbit PeriodicOrbit::canonical() const {
  Word best = word_;
  for (int shift = 1; shift < period(); ++shift) {
    Word candidate = prefix(shift, period());
    if (candidate < best) best = std::move(candidate);
  }
  return PeriodicOrbit(std::move(best));
}

bool PeriodicOrbit::same_orbit(const PeriodicOrbit& other) const {
  return period() == other.period() && canonical().word() == other.canonical().word();
}

double birkhoff_average(const Potential& p, const PeriodicOrbit& orbit) {
  require_admissible(p.sft(), orbit);
  double sum = 0.0;
  for (int shift = 0; shift < orbit.period(); ++shift) sum += p(orbit.prefix(shift, p.depth()));
  return sum / orbit.period();
}

Potential orbit_distance_potential(const Sft& sft, const PeriodicOrbit& orbit, int depth) {
  require_admissible(sft, orbit);
  return Potential::from_function(sft, depth, [&](std::span<const Symbol> w) {
    const int j = longest_orbit_prefix(Word(w.begin(), w.end()), orbit);
    return -std::ldexp(1.0, -j);
  });
}

Potential normalized_separation_potential(const Sft& sft, const PeriodicOrbit& a, const PeriodicOrbit& b,
                                          int depth) {
  require_admissible(sft, a);
  require_admissible(sft, b);
  if (a.same_orbit(b)) throw Error(ErrorKind::kOrbitsIntersect, "orbits coincide");
  const auto distance = [depth](const Word& w, const PeriodicOrbit& orbit) {
    const int j = longest_orbit_prefix(w, orbit);
    return j >= depth ? 0.0 : std::ldexp(1.0, -j);
  };
  return Potential::from_function(sft, depth, [&](std::span<const Symbol> span) {
    const Word w(span.begin(), span.end());
    const double da = distance(w, a);
    const double db = distance(w, b);
    if (da + db == 0.0) {
      throw Error(ErrorKind::kOrbitsIntersect,
                  "orbits share the " + std::to_string(depth) + "-prefix " + word_to_string(w));
    }
    return (db - da) / (da + db);
  });
}

Potential affine_combine(const Potential& p, const Potential& q, double t) {
  if (!(p.sft() == q.sft())) throw Error(ErrorKind::kSftMismatch, "potentials live on different SFTs");
  const int depth = std::max(p.depth(), q.depth());
  const Potential lp = p.lifted(depth);
  const Potential lq = q.lifted(depth);
  std::vector<double> values(lp.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = (1.0 - t) * lp.values()[i] + t * lq.values()[i];
  return lp.with_values(std::move(values));
}

}  // namespace mfs
