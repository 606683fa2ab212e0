#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "entland/density.hpp"
#include "entland/rng.hpp"

namespace entland::testing {

/// Random gaussian mixture with N in [1, 6] components, scales in [0.5, 2]
/// and neighbor gaps d = r·max(σ_n, σ_{n+1}) with r log-uniform in [0.5, 50].
inline MixtureDensity random_gaussian_mixture(SplitMix64& rng) {
  const int n = 1 + static_cast<int>(rng.next() % 6);
  std::vector<double> w(n), mu(n), sigma(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    w[i] = 0.05 + rng.uniform();
    total += w[i];
    sigma[i] = 0.5 + 1.5 * rng.uniform();
  }
  for (double& x : w) x /= total;
  mu[0] = 4.0 * rng.uniform() - 2.0;
  for (int i = 1; i < n; ++i) {
    const double r = 0.5 * std::pow(100.0, rng.uniform());
    mu[i] = mu[i - 1] + r * std::max(sigma[i - 1], sigma[i]);
  }
  return MixtureDensity(std::move(w), std::move(mu), std::move(sigma));
}

}  // namespace entland::testing
