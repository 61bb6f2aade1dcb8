#include "mfs/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mfs/error.hpp"

namespace mfs {

namespace {

double second_difference(const std::vector<double>& v, std::size_t i) { return v[i - 1] - 2.0 * v[i] + v[i + 1]; }

void require_convex(const GridFunction& f) {
  if (!is_convex(f)) throw Error(ErrorKind::kNotConvex, "function is not convex on its grid");
}

// Kinks (curvature far above the neighbouring curvature) get no parabola.
bool smooth_at(const std::vector<double>& v, std::size_t i) {
  const double d2 = second_difference(v, i);
  if (!(d2 > 0.0)) return false;
  double neighbour = 0.0;
  bool has_neighbour = false;
  if (i >= 2) {
    neighbour = std::max(neighbour, second_difference(v, i - 1));
    has_neighbour = true;
  }
  if (i + 2 < v.size()) {
    neighbour = std::max(neighbour, second_difference(v, i + 1));
    has_neighbour = true;
  }
  return has_neighbour && d2 <= 4.0 * neighbour;
}

// sup of y x - q_i(x) over the half cell around x_i, where q_i is the
// parabola through the samples i-1, i, i+1 (the sample itself at ends and
// kinks). The pieces do not depend on y, so their maximum is convex in y.
double piece_value(const GridFunction& f, double y, std::size_t i) {
  const auto& v = f.values();
  const auto& x = f.x();
  const double base = y * x[i] - v[i];
  if (i == 0 || i + 1 >= f.size() || !smooth_at(v, i)) return base;
  const double d2 = second_difference(v, i);
  const double slope = ((y * x[i + 1] - v[i + 1]) - (y * x[i - 1] - v[i - 1])) / 2.0;
  const double u = std::clamp(slope / d2, -0.5, 0.5);
  return base + slope * u - 0.5 * d2 * u * u;
}

constexpr std::size_t kPieceWindow = 3;

double refined_value(const GridFunction& f, double y, std::size_t i) {
  const std::size_t lo = i > kPieceWindow ? i - kPieceWindow : 0;
  const std::size_t hi = std::min(f.size() - 1, i + kPieceWindow);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = lo; j <= hi; ++j) best = std::max(best, piece_value(f, y, j));
  return best;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

}  // namespace

GridFunction::GridFunction(std::vector<double> x, std::vector<double> values)
    : x_(std::move(x)), values_(std::move(values)) {
  if (x_.size() != values_.size()) throw Error(ErrorKind::kInvalidArgument, "grid and values differ in length");
  if (x_.empty() || x_.size() == 2) {
    throw Error(ErrorKind::kInvalidArgument, "grid functions need one point or at least three");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(values_[i])) {
      throw Error(ErrorKind::kInvalidArgument, "grid function entries must be finite");
    }
  }
  if (x_.size() == 1) return;
  const double span = x_.back() - x_.front();
  if (!(span > 0.0)) throw Error(ErrorKind::kInvalidArgument, "grid must be strictly increasing");
  const double step = span / static_cast<double>(x_.size() - 1);
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (std::abs((x_[i] - x_[i - 1]) - step) > 1e-12 * std::max(span, 1.0)) {
      throw Error(ErrorKind::kInvalidArgument, "grid is not uniform at index " + std::to_string(i));
    }
  }
}

GridFunction GridFunction::uniform(double lo, double hi, std::size_t n, const std::function<double(double)>& f) {
  if (n == 1) return point(lo, f(lo));
  auto x = uniform_grid(lo, hi, n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(x[i]);
  return GridFunction(std::move(x), std::move(v));
}

double GridFunction::operator()(double x) const {
  if (is_point()) {
    if (std::abs(x - x_[0]) > 1e-12 * std::max(1.0, std::abs(x))) {
      throw Error(ErrorKind::kInvalidArgument, "point function evaluated away from its support");
    }
    return values_[0];
  }
  const double h = spacing();
  const double slack = 1e-12 * (back() - front());
  if (x < front() - slack || x > back() + slack) {
    throw Error(ErrorKind::kInvalidArgument, "evaluation outside the grid span");
  }
  const double u = (x - front()) / h;
  const double nearest = std::round(u);
  if (std::abs(u - nearest) < 1e-12) return values_[static_cast<std::size_t>(nearest)];
  const auto n = static_cast<long>(size());
  long start = static_cast<long>(std::floor(u)) - 1;
  start = std::clamp(start, 0L, n - 4 < 0 ? 0L : n - 4);
  const long count = std::min(4L, n);
  double result = 0.0;
  for (long j = start; j < start + count; ++j) {
    double weight = 1.0;
    for (long m = start; m < start + count; ++m) {
      if (m != j) weight *= (u - static_cast<double>(m)) / static_cast<double>(j - m);
    }
    result += weight * values_[static_cast<std::size_t>(j)];
  }
  return result;
}

bool is_convex(const GridFunction& f, double tolerance) {
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    if (second_difference(f.values(), i) < -tolerance) return false;
  }
  return true;
}

bool is_concave(const GridFunction& f, double tolerance) {
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    if (second_difference(f.values(), i) > tolerance) return false;
  }
  return true;
}

std::vector<double> conjugate_values(const GridFunction& f, std::span<const double> ys) {
  const auto& x = f.x();
  const auto& v = f.values();
  const std::size_t n = f.size();
  std::vector<double> out(ys.size());
  const bool sorted = std::is_sorted(ys.begin(), ys.end());
  std::size_t i = 0;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const double y = ys[k];
    const auto g = [&](std::size_t j) { return y * x[j] - v[j]; };
    if (sorted) {
      // argmax is nondecreasing in y for convex f
      while (i + 1 < n && g(i + 1) > g(i)) ++i;
    } else {
      i = 0;
      for (std::size_t j = 1; j < n; ++j)
        if (g(j) > g(i)) i = j;
    }
    out[k] = refined_value(f, y, i);
  }
  return out;
}

double conjugate_value(const GridFunction& f, double y) {
  const double ys[] = {y};
  return conjugate_values(f, ys)[0];
}

GridFunction legendre(const GridFunction& f, std::size_t output_size) {
  if (f.is_point()) throw Error(ErrorKind::kInvalidArgument, "cannot take the slope range of a point function");
  require_convex(f);
  const double h = f.spacing();
  const auto& v = f.values();
  const double lo = (v[1] - v[0]) / h;
  const double hi = (v[f.size() - 1] - v[f.size() - 2]) / h;
  if (hi - lo <= 1e-12 * (1.0 + std::abs(lo) + std::abs(hi))) {
    return GridFunction::point(lo, conjugate_value(f, lo));
  }
  if (output_size == 0) output_size = f.size();
  if (output_size < 3) throw Error(ErrorKind::kInvalidArgument, "conjugate needs at least three samples");
  auto ys = uniform_grid(lo, hi, output_size);
  auto values = conjugate_values(f, ys);
  return GridFunction(std::move(ys), std::move(values));
}

CmsFunction spectrum_from_pressure(const GridFunction& pressure, double slope_tolerance) {
  if (pressure.is_point()) throw Error(ErrorKind::kInvalidArgument, "pressure must be sampled on a grid");
  require_convex(pressure);
  const auto& v = pressure.values();
  const double h = pressure.spacing();
  const std::size_t cells = pressure.size() - 1;
  const auto slope = [&](std::size_t j) { return (v[j + 1] - v[j]) / h; };
  const std::size_t margin = std::max<std::size_t>(1, cells / 10);
  const double left_drift = std::abs(slope(std::min(margin, cells - 1)) - slope(0));
  const double right_drift = std::abs(slope(cells - 1) - slope(cells - 1 - std::min(margin, cells - 1)));
  const double drift = std::max(left_drift, right_drift);
  if (drift > slope_tolerance) {
    std::ostringstream msg;
    msg << "boundary slopes drift by " << drift << " across the outer 10% (tolerance " << slope_tolerance << ")";
    throw Error(ErrorKind::kSlopesNotStabilized, msg.str());
  }

  const GridFunction conjugate = legendre(pressure);
  std::vector<double> values = conjugate.values();
  for (auto& value : values) value = -value;
  GridFunction spectrum(conjugate.x(), std::move(values));
  const auto& s = spectrum.values();
  const auto best = static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
  return CmsFunction{spectrum, best, s[best]};
}

double fenchel_roundtrip_error(const GridFunction& f) {
  const GridFunction conjugate = legendre(f, 4 * (f.size() - 1) + 1);
  const auto& t = f.x();
  std::vector<double> biconjugate;
  if (conjugate.is_point()) {
    biconjugate.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) biconjugate[i] = t[i] * conjugate.x()[0] - conjugate.values()[0];
  } else {
    biconjugate = conjugate_values(conjugate, t);
  }
  const std::size_t n = f.size();
  const auto first = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(n - 1)));
  const auto last = static_cast<std::size_t>(std::floor(0.95 * static_cast<double>(n - 1)));
  double error = 0.0;
  for (std::size_t i = first; i <= last; ++i) error = std::max(error, std::abs(biconjugate[i] - f.values()[i]));
  return error;
}

std::pair<double, double> supporting_intercepts(const GridFunction& f) {
  if (f.is_point()) throw Error(ErrorKind::kInvalidArgument, "intercepts need a sampled function");
  require_convex(f);
  const auto& t = f.x();
  const auto& v = f.values();
  const double h = f.spacing();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const auto visit = [&](std::size_t i, double slope) {
    const double intercept = v[i] - slope * t[i];
    lo = std::min(lo, intercept);
    hi = std::max(hi, intercept);
  };
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i > 0) visit(i, (v[i] - v[i - 1]) / h);
    if (i + 1 < f.size()) visit(i, (v[i + 1] - v[i]) / h);
  }
  return {lo, hi};
}

CmsFunction validate_cms(const GridFunction& h, double max_entropy, double tolerance) {
  const auto& v = h.values();
  if (!is_concave(h)) throw Error(ErrorKind::kNotConcave, "spectrum is not concave");
  const double lowest = *std::min_element(v.begin(), v.end());
  if (lowest < -1e-12) {
    throw Error(ErrorKind::kNegativeValues, "spectrum takes the negative value " + std::to_string(lowest));
  }
  const auto best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  const double top = v[best];
  if (!(top > 0.0)) throw Error(ErrorKind::kMaxMismatch, "spectrum maximum is not strictly positive");
  if (std::abs(top - max_entropy) > tolerance) {
    std::ostringstream msg;
    msg << "maximum " << top << " differs from " << max_entropy << " by more than " << tolerance;
    throw Error(ErrorKind::kMaxMismatch, msg.str());
  }
  std::size_t first = v.size();
  std::size_t last = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= top - 1e-12) {
      first = std::min(first, i);
      last = std::max(last, i);
      ++count;
    }
  }
  if (count > 2 || last - first > 1) {
    throw Error(ErrorKind::kNonUniqueMaximizer,
                "maximum attained on " + std::to_string(count) + " grid points (" + std::to_string(first) + ".." +
                    std::to_string(last) + ")");
  }
  return CmsFunction{h, best, top};
}

}  // namespace mfs
