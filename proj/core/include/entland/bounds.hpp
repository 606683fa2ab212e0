#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "entland/density.hpp"

namespace entland {

/// Ω_n for one component: an open interval around μ_n of length d_n.
struct OmegaInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t component = 0;
  /// d_n = distance to the nearest other location (+inf when N = 1).
  double gap = 0.0;
};

/// Disjoint Ω_n intervals ordered by location.
struct OmegaPartition {
  std::vector<OmegaInterval> intervals;

  const OmegaInterval& for_component(std::size_t n) const;
};

/// Per-component overlap terms, indexed like the mixture's components.
struct OverlapTerms {
  std::vector<double> eps;
  std::vector<double> eps_prime;
};

struct DecisionBounds {
  double upper = 0.0;
  double lower = 0.0;
};

struct EntropyBoundsReport {
  double approximator = 0.0;
  double lower = 0.0;
  OverlapTerms overlap;
  OmegaPartition partition;
  std::optional<double> bayes_error;
  std::optional<double> decision_upper;
  std::optional<double> decision_lower;
};

/// ℋ(p) = Σ π_n H(K_n) + h(π) = H(K) + Σ π_n ln σ_n + h(π). Upper bound on H(p).
double approximator(const MixtureDensity& m);

/// Centered partition Ω_n = (μ_n - d_n/2, μ_n + d_n/2). A lone component's
/// interval is truncated to the quadrature range. Throws DuplicateLocations
/// when two locations coincide within 1e-12.
OmegaPartition omega_partition(const MixtureDensity& m, const QuadratureSpec& q);
OmegaPartition omega_partition(const MixtureDensity& m);

/// ε_n and ε'_n by quadrature over ℝ∖Ω_n: the midpoint rule on q, split at
/// the Ω edges, with one Richardson step against the rule at half the step.
OverlapTerms overlap_terms_numeric(const MixtureDensity& m, const OmegaPartition& part,
                                   const QuadratureSpec& q);

/// Closed forms for the gaussian kernel with the centered partition:
///   ε  = erfc(d/(2√2σ))
///   ε' = ½ erfc(d/(2√2σ)) + d/(2√(2π)σ) · exp(-[d/(2√2σ)]²)
OverlapTerms overlap_terms_gaussian(const MixtureDensity& m, const OmegaPartition& part);

/// H_α(Φ) = -∫_{-α/2}^{α/2} Φ ln Φ, the partial entropy of the standard gaussian.
double gaussian_partial_entropy(double alpha);

/// ℋ(p) - Σ π_n ε'_n - Σ π_n [ln(max_m sup K_m / (π_n sup K_n)) + 1] ε_n.
double lower_bound(const MixtureDensity& m, const OverlapTerms& terms);

/// P(e) = ∫ [p(y) - max_n π_n K_n(y)] dy. The integrand is summed as the
/// non-maximal terms, so separable mixtures give exact zeros. Cells are split
/// where the most probable component changes, and one Richardson step
/// against half-width cells follows.
double bayes_error(const MixtureDensity& m, const QuadratureSpec& q);
double bayes_error(const MixtureDensity& m);

/// Decision-theoretic bounds from P(e):
///   upper = ℋ - 2 ln2 · P(e)      (Hellman–Raviv, rewritten in nats)
///   lower = ℋ - 2 √((N-1) P(e))   (Lin)
DecisionBounds decision_bounds(const MixtureDensity& m, double pe);

/// Merges components whose locations are within rel_tol · max σ. The merged
/// component takes the summed weight and weight-averaged location and scale.
MixtureDensity merge_close_components(const MixtureDensity& m, double rel_tol = 1e-9);

/// Approximator, overlap-term lower bound (closed-form ε for gaussian kernels,
/// numeric otherwise) and optionally the Bayes-error bounds, after merging
/// near-coincident components.
EntropyBoundsReport entropy_bounds(const MixtureDensity& m, const QuadratureSpec& q,
                                   bool with_decision = true);

}  // namespace entland
