#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "entland/kernel.hpp"
#include "entland/quadrature.hpp"

namespace entland {

/// p(y) = Σ π_n (1/σ_n) K((y - μ_n)/σ_n) over a shared standardized kernel K.
///
/// Immutable once built. Construction validates that the weights are
/// strictly positive and sum to one within 1e-12, and that every scale is
/// positive; otherwise throws InvalidDistribution.
class MixtureDensity {
 public:
  MixtureDensity(std::vector<double> weights, std::vector<double> locations,
                 std::vector<double> scales, ScalarKernel kernel = ScalarKernel::gaussian());

  static MixtureDensity single(double location, double scale,
                               ScalarKernel kernel = ScalarKernel::gaussian());

  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> locations() const { return locations_; }
  std::span<const double> scales() const { return scales_; }
  ScalarKernel kernel() const { return kernel_; }

  double pdf(double y) const;
  /// (1/σ_n) K((y - μ_n)/σ_n), without the weight.
  double component_pdf(std::size_t n, double y) const;
  /// pdf at every y; same summation order as pdf(), hence bitwise equal.
  void pdf(std::span<const double> ys, std::span<double> out) const;

  double mean() const;
  double variance() const;
  double min_location() const;
  double max_location() const;
  double max_scale() const;

  /// Density of c·Y for c > 0.
  MixtureDensity scaled(double c) const;

  /// Support edges of uniform components (empty for gaussian kernels).
  std::vector<double> breakpoints() const;

 private:
  std::vector<double> weights_;
  std::vector<double> locations_;
  std::vector<double> scales_;
  ScalarKernel kernel_;
};

/// [min μ - 10·max σ, max μ + 10·max σ] with 20001 steps unless `rule` says otherwise.
QuadratureSpec default_quadrature(const MixtureDensity& m, const QuadratureRule& rule = {});

/// Nodes for `m` over `q`, split at the kernel's discontinuities.
QuadratureNodes mixture_nodes(const MixtureDensity& m, const QuadratureSpec& q);

double pdf_eval(const MixtureDensity& m, double y);

/// Shannon differential entropy in nats by midpoint quadrature.
/// Throws RangeTooNarrow when the range misses more than 1e-6 of the mass.
double entropy_quadrature(const MixtureDensity& m, const QuadratureSpec& q);
double entropy_quadrature(const MixtureDensity& m);

/// h(π) = -Σ π ln π with 0 ln 0 = 0. Throws InvalidDistribution on negative
/// entries or a sum off by more than 1e-9.
double discrete_entropy(std::span<const double> probs);

/// Observed draws of a scalar variable. Requires at least two finite values.
class SampleSet {
 public:
  explicit SampleSet(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double mean() const;
  /// Population standard deviation (divides by S).
  double stddev() const;

 private:
  std::vector<double> values_;
};

/// Gaussian KDE with σ_K = 0.5·σ̂·S^{-1/5}, one equal-weight component per draw.
MixtureDensity parzen_density(const SampleSet& s);
double parzen_bandwidth(const SampleSet& s);

/// Entropy of the Parzen KDE; the grid follows `rule` applied to the KDE itself.
double parzen_entropy(const SampleSet& s, const QuadratureRule& rule = {});

/// ψ(y) = -p'(y)/p(y). Gaussian kernel only (NonSmoothKernel otherwise);
/// Underflow if p(y) < 1e-300.
double score_function(const MixtureDensity& m, double y);
/// ψ'(y) = ψ(y)² - p''(y)/p(y), same preconditions as score_function.
double score_derivative(const MixtureDensity& m, double y);

/// J = E[ψ²(Y)] by quadrature; nodes with p < 1e-300 contribute zero.
double fisher_information(const MixtureDensity& m, const QuadratureSpec& q);
double fisher_information(const MixtureDensity& m);

}  // namespace entland
