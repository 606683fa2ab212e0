#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace entland {

/// Distinct values of one scalar discrete variable with their probabilities.
struct Marginal {
  std::vector<double> values;
  std::vector<double> probs;

  /// Throws InvalidDistribution unless sizes match, probs are positive and
  /// sum to one within 1e-12, and values are pairwise distinct.
  void validate() const;
  double mean() const;
  double variance() const;
};

/// Discrete random vector U in ℝ^K given by its atoms and probabilities.
class DiscreteVectorDistribution {
 public:
  /// Atoms must share one dimension K >= 1 and differ pairwise by more than
  /// 1e-12 in the ∞-norm; probs must be positive and sum to one within 1e-12.
  DiscreteVectorDistribution(std::vector<std::vector<double>> atoms, std::vector<double> probs);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::vector<double>>& atoms() const { return atoms_; }
  const std::vector<double>& atom(std::size_t i) const { return atoms_[i]; }
  std::span<const double> probs() const { return probs_; }

  /// h(U), the entropy of the atom probabilities.
  double entropy() const;
  /// Law of the j-th coordinate, with equal values merged.
  Marginal marginal(std::size_t j) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<double>> atoms_;
  std::vector<double> probs_;
};

/// Independent components: atoms are the Cartesian product (last index
/// fastest) and probabilities the products of the marginal ones.
DiscreteVectorDistribution product_distribution(const std::vector<Marginal>& marginals);

/// Distinct values of wU with merged probabilities.
struct ProjectionSpectrum {
  std::vector<double> values;
  std::vector<double> probs;
  double merge_tol = 0.0;

  std::size_t size() const { return values.size(); }
};

/// 1e-9 times the largest coordinate range of the atoms.
double default_merge_tol(const DiscreteVectorDistribution& u);

/// Projects every atom on w and merges sorted values whose consecutive gap is
/// at most merge_tol (single linkage). A merged value is the probability
/// weighted mean of its members. Throws NotUnitNorm if | ‖w‖ - 1 | > 1e-9.
ProjectionSpectrum project(const DiscreteVectorDistribution& u, std::span<const double> w,
                           double merge_tol);
/// h(wU). Depends only on which atoms collide, never on the values.
double projection_entropy(const DiscreteVectorDistribution& u, std::span<const double> w,
                          double merge_tol);

/// w_θ = [sin θ, cos θ]; θ = 0 is the axis of the second component.
std::vector<double> direction_from_theta(double theta);
/// Inverse of direction_from_theta up to sign, canonicalized to [0, π).
double theta_from_direction(std::span<const double> w);

struct CandidateDirection {
  std::vector<double> w_star;
  /// Angle in [0, π) when K = 2, NaN otherwise.
  double theta = 0.0;
  /// Atom index pairs (i < j) with w_star·(u_i - u_j) = 0.
  std::vector<std::pair<std::size_t, std::size_t>> generating_pairs;
  double entropy = 0.0;
  /// h(U) - h(w_star U).
  double entropy_drop = 0.0;
  /// False for identity-row directions.
  bool mixing = false;
};

/// K = 2: the normal of every atom difference, deduplicated within 1e-9 rad
/// and sorted by angle. Directions whose drop is at most 1e-12 are dropped.
std::vector<CandidateDirection> candidate_directions_2d(const DiscreteVectorDistribution& u,
                                                        double merge_tol);
std::vector<CandidateDirection> candidate_directions_2d(const DiscreteVectorDistribution& u);

/// The K identity rows. Throws DegenerateMarginal if a component is constant.
std::vector<CandidateDirection> candidate_directions_axes(const DiscreteVectorDistribution& u,
                                                          double merge_tol);
std::vector<CandidateDirection> candidate_directions_axes(const DiscreteVectorDistribution& u);

inline constexpr std::size_t kGeneralCandidateAtomLimit = 64;

/// Any K: normals of the affine hull of every K-subset of atoms, found by
/// Gram–Schmidt. Returns nullopt when the atom count exceeds max_atoms, since
/// the enumeration grows as C(|U|, K).
std::optional<std::vector<CandidateDirection>> candidate_directions_general(
    const DiscreteVectorDistribution& u, double merge_tol,
    std::size_t max_atoms = kGeneralCandidateAtomLimit);

struct Lemma2Report {
  std::size_t samples = 0;
  /// min over sampled w of h(wU) - h(w* U).
  double min_gap = 0.0;
  /// Sampled range of h(wU).
  double min_entropy = 0.0;
  double max_entropy = 0.0;
  /// K = 2 only: every sample has h(wU) = h(U) within 1e-12.
  std::optional<bool> strong_form;
};

/// Samples `grid` directions at equal angles within `radius` of w* (a
/// circle arc for K = 2, arcs towards ± each orthonormal complement vector
/// otherwise), skipping w* itself. Throws NeighborhoodContainsOtherCandidate
/// if some other candidate lies within the radius.
Lemma2Report verify_lemma2(const DiscreteVectorDistribution& u, const CandidateDirection& cand,
                           double radius, int grid, double merge_tol);

}  // namespace entland
