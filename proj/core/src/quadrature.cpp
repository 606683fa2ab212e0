#include "entland/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "entland/error.hpp"

namespace entland {

void QuadratureSpec::validate() const {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    std::ostringstream os;
    os << "quadrature range must satisfy lo < hi (lo=" << lo << ", hi=" << hi << ")";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  if (steps < 2) throw Error(ErrorCode::invalid_argument, "quadrature needs at least 2 steps");
}

void QuadratureRule::validate() const {
  if (!(half_width_sigmas > 0.0 && std::isfinite(half_width_sigmas))) {
    throw Error(ErrorCode::invalid_argument, "half_width_sigmas must be positive");
  }
  if (steps < 2) throw Error(ErrorCode::invalid_argument, "quadrature needs at least 2 steps");
}

QuadratureSpec QuadratureRule::range_for(double min_location, double max_location,
                                         double max_scale) const {
  validate();
  QuadratureSpec q{min_location - half_width_sigmas * max_scale,
                   max_location + half_width_sigmas * max_scale, steps};
  q.validate();
  return q;
}

QuadratureNodes midpoint_nodes(const QuadratureSpec& q, std::span<const double> breakpoints,
                               int min_cells) {
  q.validate();
  std::vector<double> cuts{q.lo};
  for (double b : breakpoints) {
    if (b > q.lo && b < q.hi) cuts.push_back(b);
  }
  cuts.push_back(q.hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  QuadratureNodes nodes;
  nodes.y.reserve(static_cast<std::size_t>(q.steps) + cuts.size());
  nodes.w.reserve(nodes.y.capacity());
  const double total = q.hi - q.lo;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    // A lone segment gets exactly q.steps cells.
    const int n = cuts.size() == 2
                      ? q.steps
                      : std::max({1, min_cells, static_cast<int>(std::ceil(q.steps * (b - a) / total))});
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) {
      nodes.y.push_back(a + (i + 0.5) * h);
      nodes.w.push_back(h);
    }
  }
  return nodes;
}

double entropy_on_nodes(const QuadratureNodes& nodes, std::span<const double> pdf) {
  double mass = 0.0;
  double h = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double p = pdf[i];
    mass += p * nodes.w[i];
    if (p >= kDensityFloor) h -= p * std::log(p) * nodes.w[i];
  }
  if (mass < 1.0 - kMassTolerance) {
    std::ostringstream os;
    os << "quadrature captures mass " << mass << " < 1 - " << kMassTolerance;
    throw Error(ErrorCode::range_too_narrow, os.str());
  }
  return h;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace entland
