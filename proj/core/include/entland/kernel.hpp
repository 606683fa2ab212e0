#pragma once

#include <numbers>

namespace entland {

inline constexpr double kSqrt3 = 1.7320508075688772935;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
/// H(Φ) = ½ ln(2πe), the entropy of the standard gaussian in nats.
inline constexpr double kGaussianEntropy = 1.4189385332046727418;

enum class KernelKind { gaussian, uniform };

/// Standardized (zero mean, unit variance) unimodal base density.
///
/// gaussian: Φ(x) = (2π)^{-1/2} exp(-x²/2)
/// uniform:  1/(2√3) on [-√3, √3]
class ScalarKernel {
 public:
  constexpr ScalarKernel() = default;
  constexpr explicit ScalarKernel(KernelKind kind) : kind_(kind) {}

  static constexpr ScalarKernel gaussian() { return ScalarKernel(KernelKind::gaussian); }
  static constexpr ScalarKernel uniform() { return ScalarKernel(KernelKind::uniform); }

  constexpr KernelKind kind() const { return kind_; }
  constexpr bool is_gaussian() const { return kind_ == KernelKind::gaussian; }
  /// Differentiable everywhere, so a score function exists.
  constexpr bool smooth() const { return kind_ == KernelKind::gaussian; }

  double pdf(double x) const;
  double cdf(double x) const;
  /// Differential entropy in nats.
  double entropy() const;
  double sup() const;
  /// Half-width of the support; +inf for the gaussian.
  double half_support() const;

  constexpr bool operator==(const ScalarKernel&) const = default;

 private:
  KernelKind kind_ = KernelKind::gaussian;
};

const char* to_string(KernelKind kind) noexcept;

}  // namespace entland
