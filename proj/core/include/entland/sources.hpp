#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "entland/density.hpp"
#include "entland/discrete.hpp"
#include "entland/kernel.hpp"
#include "entland/rng.hpp"

namespace entland {

/// One scalar source S = U + scale·K with U discrete and K a standardized kernel.
struct SourceSpec {
  enum class Type { gaussian, uniform, discrete_plus_noise };

  Type type = Type::gaussian;
  std::vector<double> values{0.0};
  std::vector<double> probs{1.0};
  double sigma = 1.0;
  ScalarKernel kernel = ScalarKernel::gaussian();

  /// Standard gaussian: atom {0}, gaussian kernel, scale 1.
  static SourceSpec gaussian();
  /// Unit-variance uniform: atom {0}, uniform kernel, scale 1.
  static SourceSpec uniform();
  static SourceSpec discrete(std::vector<double> values, std::vector<double> probs, double sigma,
                             ScalarKernel kernel = ScalarKernel::gaussian());

  Marginal marginal() const { return {values, probs}; }
  /// var(U) + sigma².
  double variance() const;
};

const char* to_string(SourceSpec::Type type) noexcept;

enum class VarianceMode {
  /// Center each source and scale it to unit variance.
  rescale_to_unit,
  /// Use the values and sigma exactly as written.
  as_given,
};

/// The law of w·(σ_1 K_1, ..., σ_K K_K): a gaussian part with standard
/// deviation `gauss_sd` convolved with centered uniforms of the listed
/// half-widths (largest first).
struct NoiseKernel {
  double gauss_sd = 0.0;
  std::vector<double> uniform_half_widths;

  double stddev() const;
  bool pure_gaussian() const { return uniform_half_widths.empty(); }
};

/// K independent sources S_k = U_k + σ_k K_k.
class SourceModel {
 public:
  /// With `enforce_equal_variance`, the source variances must agree within
  /// 1e-6 (always true after rescaling); otherwise throws InvalidArgument.
  explicit SourceModel(std::vector<SourceSpec> specs,
                       VarianceMode mode = VarianceMode::rescale_to_unit,
                       bool enforce_equal_variance = true);

  std::size_t dim() const { return sources_.size(); }
  VarianceMode mode() const { return mode_; }
  bool enforce_equal_variance() const { return enforce_equal_variance_; }
  /// Sources as written by the caller.
  const std::vector<SourceSpec>& specs() const { return specs_; }
  /// Sources after the variance mode was applied.
  const std::vector<SourceSpec>& sources() const { return sources_; }
  const DiscreteVectorDistribution& atoms() const { return atoms_; }

  double source_variance(std::size_t k) const { return sources_.at(k).variance(); }
  bool equal_variances(double tol = 1e-6) const;
  /// p_{S_k} as a mixture over the atoms of U_k.
  MixtureDensity source_density(std::size_t k) const;
  /// Same model with every discrete-plus-noise sigma replaced by `sigma`.
  SourceModel with_noise_scale(double sigma) const;

  NoiseKernel noise(std::span<const double> w) const;

  /// One draw of (S_1, ..., S_K). For each source in order: the atom by
  /// inverse CDF from one uniform, then the kernel noise (one normal, or one
  /// uniform mapped to [-√3, √3]).
  std::vector<double> sample(SplitMix64& rng) const;

 private:
  std::vector<SourceSpec> specs_;
  std::vector<SourceSpec> sources_;
  VarianceMode mode_;
  bool enforce_equal_variance_;
  DiscreteVectorDistribution atoms_;
};

}  // namespace entland
