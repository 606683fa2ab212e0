#include "entland/kernel.hpp"

#include <cmath>
#include <limits>

namespace entland {

double ScalarKernel::pdf(double x) const {
  if (kind_ == KernelKind::gaussian) return kInvSqrt2Pi * std::exp(-0.5 * x * x);
  return std::abs(x) <= kSqrt3 ? 1.0 / (2.0 * kSqrt3) : 0.0;
}

double ScalarKernel::cdf(double x) const {
  if (kind_ == KernelKind::gaussian) return 0.5 * std::erfc(-x / std::numbers::sqrt2);
  if (x <= -kSqrt3) return 0.0;
  if (x >= kSqrt3) return 1.0;
  return (x + kSqrt3) / (2.0 * kSqrt3);
}

double ScalarKernel::entropy() const {
  if (kind_ == KernelKind::gaussian) return kGaussianEntropy;
  return std::log(2.0 * kSqrt3);
}

double ScalarKernel::sup() const {
  return kind_ == KernelKind::gaussian ? kInvSqrt2Pi : 1.0 / (2.0 * kSqrt3);
}

double ScalarKernel::half_support() const {
  return kind_ == KernelKind::gaussian ? std::numeric_limits<double>::infinity() : kSqrt3;
}

const char* to_string(KernelKind kind) noexcept {
  return kind == KernelKind::gaussian ? "gaussian" : "uniform";
}

}  // namespace entland
