#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace entland {

/// Uniform midpoint rule on [lo, hi] with `steps` subintervals.
struct QuadratureSpec {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 20001;

  /// Throws InvalidArgument unless lo < hi and steps >= 2.
  void validate() const;
  double step() const { return (hi - lo) / steps; }
};

/// How a QuadratureSpec is derived from a density: the range extends
/// `half_width_sigmas` kernel standard deviations past the extreme locations.
struct QuadratureRule {
  double half_width_sigmas = 10.0;
  int steps = 20001;

  void validate() const;
  QuadratureSpec range_for(double min_location, double max_location, double max_scale) const;
};

/// Midpoint nodes and weights. Interior breakpoints split the range so no
/// cell straddles a discontinuity; with no breakpoints this is exactly the
/// plain uniform midpoint rule.
struct QuadratureNodes {
  std::vector<double> y;
  std::vector<double> w;

  std::size_t size() const { return y.size(); }
};

/// `min_cells` is a floor on the cells of each segment, so that short
/// segments around sharp features are still resolved.
QuadratureNodes midpoint_nodes(const QuadratureSpec& q, std::span<const double> breakpoints = {},
                               int min_cells = 1);

/// p(y) below this is treated as exact zero (0·ln 0 = 0).
inline constexpr double kDensityFloor = 1e-300;
/// Total mass the quadrature must capture.
inline constexpr double kMassTolerance = 1e-6;

/// -Σ p ln p · w over the nodes. Throws RangeTooNarrow if Σ p·w < 1 - 1e-6.
double entropy_on_nodes(const QuadratureNodes& nodes, std::span<const double> pdf);

/// Runs fn(i) for i in [0, n) across hardware threads. Each index is
/// independent, so results match sequential evaluation exactly.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace entland
