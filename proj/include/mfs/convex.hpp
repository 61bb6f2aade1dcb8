#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace mfs {

/// Samples of a scalar function on a uniform grid. A single sample is allowed
/// and stands for a function supported on one point (the conjugate of an
/// affine function, the spectrum of a constant potential).
class GridFunction {
 public:
  /// Throws kInvalidArgument unless sizes match and the grid is a single
  /// point or at least 3 strictly increasing, uniformly spaced points.
  GridFunction(std::vector<double> x, std::vector<double> values);

  static GridFunction uniform(double lo, double hi, std::size_t n, const std::function<double(double)>& f);
  static GridFunction point(double x, double value) { return GridFunction({x}, {value}); }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return x_.size(); }
  bool is_point() const { return x_.size() == 1; }
  double spacing() const { return is_point() ? 0.0 : (x_.back() - x_.front()) / static_cast<double>(size() - 1); }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

  /// Four-point Lagrange interpolation (exact at grid points). Throws
  /// kInvalidArgument outside the grid span.
  double operator()(double x) const;

 private:
  std::vector<double> x_;
  std::vector<double> values_;
};

/// A member of the concave spectrum class: nonnegative, concave, with a
/// strictly positive maximum at a unique point (one flat cell tolerated).
struct CmsFunction {
  GridFunction base;
  std::size_t maximizer_index = 0;
  double max_value = 0.0;
};

bool is_convex(const GridFunction& f, double tolerance = 1e-9);
bool is_concave(const GridFunction& f, double tolerance = 1e-9);

/// sup over the grid of y*x_i - f_i for each y, refined by the parabolas
/// through consecutive samples, each restricted to the half cell around its
/// middle sample (none at kinks, where the local curvature is far above its
/// neighbours). Pieces within three cells of the grid maximizer are compared.
/// The pieces do not depend on y, so the result is convex in y.
std::vector<double> conjugate_values(const GridFunction& f, std::span<const double> ys);
double conjugate_value(const GridFunction& f, double y);

/// F*(a) = sup_t (a t - F(t)) sampled uniformly on the slope range of F
/// with output_size points (default: as many as F). Affine input yields a
/// single-point function. Throws kNotConvex.
GridFunction legendre(const GridFunction& f, std::size_t output_size = 0);

/// h(a) = inf_t (F(t) - t a) on [D-, D+], the extreme discrete slopes.
/// Throws kNotConvex, or kSlopesNotStabilized when the discrete slope moves
/// by more than slope_tolerance across either outer 10% of the grid. The
/// maximizer is reported but uniqueness is left to validate_cms.
CmsFunction spectrum_from_pressure(const GridFunction& pressure, double slope_tolerance);

/// sup |F** - F| over the grid, excluding 5% margins at both ends. F* is
/// sampled four times finer than F.
double fenchel_roundtrip_error(const GridFunction& f);

/// Range of the intercepts F(t_i) - v t_i over all grid points and their
/// one-sided discrete slopes v.
std::pair<double, double> supporting_intercepts(const GridFunction& f);

/// Throws kNotConcave, kNegativeValues, kMaxMismatch (|max - H| > tol) or
/// kNonUniqueMaximizer (flat top wider than one cell).
CmsFunction validate_cms(const GridFunction& h, double max_entropy, double tolerance);

}  // namespace mfs
