#include "entland/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "entland/error.hpp"

namespace entland {

namespace {

// exp(-x²/2) underflows to exactly zero beyond ~38.6, so skipping those
// nodes leaves sums unchanged bit for bit.
constexpr double kGaussianWindow = 40.0;

void check_same_length(std::size_t a, std::size_t b, std::size_t c) {
  if (a != b || a != c) {
    throw Error(ErrorCode::invalid_distribution,
                "weights, locations and scales must have equal length");
  }
}

}  // namespace

MixtureDensity::MixtureDensity(std::vector<double> weights, std::vector<double> locations,
                               std::vector<double> scales, ScalarKernel kernel)
    : weights_(std::move(weights)),
      locations_(std::move(locations)),
      scales_(std::move(scales)),
      kernel_(kernel) {
  check_same_length(weights_.size(), locations_.size(), scales_.size());
  if (weights_.empty()) throw Error(ErrorCode::invalid_distribution, "mixture needs N >= 1");
  double total = 0.0;
  for (std::size_t n = 0; n < weights_.size(); ++n) {
    if (!(weights_[n] > 0.0) || !std::isfinite(weights_[n])) {
      throw Error(ErrorCode::invalid_distribution, "mixture weights must be strictly positive");
    }
    if (!(scales_[n] > 0.0) || !std::isfinite(scales_[n])) {
      throw Error(ErrorCode::invalid_distribution, "mixture scales must be strictly positive");
    }
    if (!std::isfinite(locations_[n])) {
      throw Error(ErrorCode::invalid_distribution, "mixture locations must be finite");
    }
    total += weights_[n];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "mixture weights sum to " << total;
    throw Error(ErrorCode::invalid_distribution, os.str());
  }
}

MixtureDensity MixtureDensity::single(double location, double scale, ScalarKernel kernel) {
  return MixtureDensity({1.0}, {location}, {scale}, kernel);
}

double MixtureDensity::component_pdf(std::size_t n, double y) const {
  return kernel_.pdf((y - locations_[n]) / scales_[n]) / scales_[n];
}

double MixtureDensity::pdf(double y) const {
  double p = 0.0;
  for (std::size_t n = 0; n < size(); ++n) p += weights_[n] * component_pdf(n, y);
  return p;
}

void MixtureDensity::pdf(std::span<const double> ys, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const bool sorted = std::is_sorted(ys.begin(), ys.end());
  const double reach = kernel_.is_gaussian() ? kGaussianWindow : kSqrt3;
  for (std::size_t n = 0; n < size(); ++n) {
    std::size_t first = 0;
    std::size_t last = ys.size();
    if (sorted) {
      const double lo = locations_[n] - reach * scales_[n];
      const double hi = locations_[n] + reach * scales_[n];
      first = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), lo) - ys.begin());
      last = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), hi) - ys.begin());
    }
    for (std::size_t i = first; i < last; ++i) out[i] += weights_[n] * component_pdf(n, ys[i]);
  }
}

double MixtureDensity::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < size(); ++n) m += weights_[n] * locations_[n];
  return m;
}

double MixtureDensity::variance() const {
  // Standardized kernels have unit variance.
  const double mu = mean();
  double v = 0.0;
  for (std::size_t n = 0; n < size(); ++n) {
    const double d = locations_[n] - mu;
    v += weights_[n] * (scales_[n] * scales_[n] + d * d);
  }
  return v;
}

double MixtureDensity::min_location() const {
  return *std::min_element(locations_.begin(), locations_.end());
}

double MixtureDensity::max_location() const {
  return *std::max_element(locations_.begin(), locations_.end());
}

double MixtureDensity::max_scale() const {
  return *std::max_element(scales_.begin(), scales_.end());
}

MixtureDensity MixtureDensity::scaled(double c) const {
  if (!(c > 0.0)) throw Error(ErrorCode::invalid_argument, "scale factor must be positive");
  std::vector<double> loc(locations_);
  std::vector<double> sc(scales_);
  for (auto& x : loc) x *= c;
  for (auto& x : sc) x *= c;
  return MixtureDensity(weights_, std::move(loc), std::move(sc), kernel_);
}

std::vector<double> MixtureDensity::breakpoints() const {
  std::vector<double> out;
  if (kernel_.is_gaussian()) return out;
  out.reserve(2 * size());
  for (std::size_t n = 0; n < size(); ++n) {
    out.push_back(locations_[n] - kSqrt3 * scales_[n]);
    out.push_back(locations_[n] + kSqrt3 * scales_[n]);
  }
  return out;
}

QuadratureSpec default_quadrature(const MixtureDensity& m, const QuadratureRule& rule) {
  return rule.range_for(m.min_location(), m.max_location(), m.max_scale());
}

QuadratureNodes mixture_nodes(const MixtureDensity& m, const QuadratureSpec& q) {
  return midpoint_nodes(q, m.breakpoints());
}

double pdf_eval(const MixtureDensity& m, double y) { return m.pdf(y); }

double entropy_quadrature(const MixtureDensity& m, const QuadratureSpec& q) {
  const QuadratureNodes nodes = mixture_nodes(m, q);
  std::vector<double> p(nodes.size());
  m.pdf(nodes.y, p);
  return entropy_on_nodes(nodes, p);
}

double entropy_quadrature(const MixtureDensity& m) {
  return entropy_quadrature(m, default_quadrature(m));
}

double discrete_entropy(std::span<const double> probs) {
  if (probs.empty()) throw Error(ErrorCode::invalid_distribution, "empty probability vector");
  double total = 0.0;
  double h = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::invalid_distribution, "probabilities must be nonnegative");
    }
    total += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "probabilities sum to " << total;
    throw Error(ErrorCode::invalid_distribution, os.str());
  }
  return h;
}

SampleSet::SampleSet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw Error(ErrorCode::degenerate_sample, "need at least 2 samples");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::degenerate_sample, "samples must be finite");
  }
}

double SampleSet::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(size());
}

double SampleSet::stddev() const {
  const double mu = mean();
  double ss = 0.0;
  for (double v : values_) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(size()));
}

double parzen_bandwidth(const SampleSet& s) {
  const double sd = s.stddev();
  if (!(sd > 0.0)) throw Error(ErrorCode::degenerate_sample, "sample standard deviation is zero");
  return 0.5 * sd * std::pow(static_cast<double>(s.size()), -0.2);
}

MixtureDensity parzen_density(const SampleSet& s) {
  const double bw = parzen_bandwidth(s);
  const auto n = s.size();
  std::vector<double> locations(s.values().begin(), s.values().end());
  std::sort(locations.begin(), locations.end());
  return MixtureDensity(std::vector<double>(n, 1.0 / static_cast<double>(n)),
                        std::move(locations), std::vector<double>(n, bw));
}

double parzen_entropy(const SampleSet& s, const QuadratureRule& rule) {
  const MixtureDensity kde = parzen_density(s);
  return entropy_quadrature(kde, default_quadrature(kde, rule));
}

namespace {

struct Derivatives {
  double p = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

Derivatives gaussian_derivatives(const MixtureDensity& m, double y) {
  if (!m.kernel().smooth()) {
    throw Error(ErrorCode::non_smooth_kernel, "score function requires a gaussian kernel");
  }
  Derivatives d;
  for (std::size_t n = 0; n < m.size(); ++n) {
    const double s = m.scales()[n];
    const double x = (y - m.locations()[n]) / s;
    const double t = m.weights()[n] * kInvSqrt2Pi * std::exp(-0.5 * x * x) / s;
    d.p += t;
    d.d1 -= t * x / s;
    d.d2 += t * (x * x - 1.0) / (s * s);
  }
  return d;
}

}  // namespace

double score_function(const MixtureDensity& m, double y) {
  const Derivatives d = gaussian_derivatives(m, y);
  if (d.p < kDensityFloor) {
    std::ostringstream os;
    os << "p(" << y << ") below floor";
    throw Error(ErrorCode::underflow, os.str());
  }
  return -d.d1 / d.p;
}

double score_derivative(const MixtureDensity& m, double y) {
  const Derivatives d = gaussian_derivatives(m, y);
  if (d.p < kDensityFloor) {
    std::ostringstream os;
    os << "p(" << y << ") below floor";
    throw Error(ErrorCode::underflow, os.str());
  }
  const double psi = -d.d1 / d.p;
  return psi * psi - d.d2 / d.p;
}

double fisher_information(const MixtureDensity& m, const QuadratureSpec& q) {
  if (!m.kernel().smooth()) {
    throw Error(ErrorCode::non_smooth_kernel, "Fisher information requires a gaussian kernel");
  }
  const QuadratureNodes nodes = mixture_nodes(m, q);
  double j = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Derivatives d = gaussian_derivatives(m, nodes.y[i]);
    if (d.p < kDensityFloor) continue;
    j += d.d1 * d.d1 / d.p * nodes.w[i];
  }
  return j;
}

double fisher_information(const MixtureDensity& m) {
  return fisher_information(m, default_quadrature(m));
}

}  // namespace entland
