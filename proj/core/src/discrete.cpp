#include "entland/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "entland/density.hpp"
#include "entland/error.hpp"

namespace entland {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-9;
constexpr double kCollisionTol = 1e-9;
constexpr double kDropTol = 1e-12;

void check_probs(std::span<const double> probs, const char* what) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::invalid_distribution,
                  std::string(what) + ": probabilities must be positive and finite");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": probabilities sum to " << sum;
    throw Error(ErrorCode::invalid_distribution, os.str());
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double canonical_angle(double theta) {
  theta = std::fmod(theta, kPi);
  if (theta < 0.0) theta += kPi;
  if (kPi - theta <= kAngleTol) theta = 0.0;
  return theta + 0.0;  // no -0
}

std::vector<std::pair<std::size_t, std::size_t>> collisions(const DiscreteVectorDistribution& u,
                                                            std::span<const double> w) {
  std::vector<double> proj(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) proj[i] = dot(w, u.atom(i));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      if (std::abs(proj[i] - proj[j]) < kCollisionTol) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

CandidateDirection make_candidate(const DiscreteVectorDistribution& u, std::vector<double> w,
                                  double merge_tol) {
  CandidateDirection c;
  c.generating_pairs = collisions(u, w);
  c.entropy = projection_entropy(u, w, merge_tol);
  c.entropy_drop = u.entropy() - c.entropy;
  const auto nonzero = std::count_if(w.begin(), w.end(),
                                     [](double x) { return std::abs(x) > kAngleTol; });
  c.mixing = nonzero > 1;
  c.theta = w.size() == 2 ? theta_from_direction(w) : std::numeric_limits<double>::quiet_NaN();
  c.w_star = std::move(w);
  return c;
}

// Unit vector orthogonal to every row of `span_rows`, or empty if the rows
// do not have full rank K-1.
std::vector<double> normal_of(const std::vector<std::vector<double>>& span_rows, std::size_t dim) {
  std::vector<std::vector<double>> basis;
  for (const auto& r : span_rows) {
    std::vector<double> v = r;
    const double scale = std::sqrt(dot(v, v));
    if (scale == 0.0) return {};
    for (const auto& b : basis) {
      const double c = dot(v, b);
      for (std::size_t k = 0; k < dim; ++k) v[k] -= c * b[k];
    }
    const double norm = std::sqrt(dot(v, v));
    if (norm <= 1e-10 * scale) return {};
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  std::vector<double> best;
  double best_norm = 0.0;
  for (std::size_t e = 0; e < dim; ++e) {
    std::vector<double> v(dim, 0.0);
    v[e] = 1.0;
    for (const auto& b : basis) {
      const double c = dot(v, b);
      for (std::size_t k = 0; k < dim; ++k) v[k] -= c * b[k];
    }
    const double norm = std::sqrt(dot(v, v));
    if (norm > best_norm) {
      best_norm = norm;
      best = std::move(v);
    }
  }
  for (double& x : best) x /= best_norm;
  // w and -w are the same direction: make the first significant entry positive.
  for (double x : best) {
    if (std::abs(x) > kAngleTol) {
      if (x < 0.0) {
        for (double& y : best) y = -y;
      }
      break;
    }
  }
  for (double& x : best) {
    if (std::abs(x) <= 1e-15) x = 0.0;
  }
  return best;
}

}  // namespace

void Marginal::validate() const {
  if (values.empty() || values.size() != probs.size()) {
    throw Error(ErrorCode::invalid_distribution, "marginal values and probs must match in size");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_distribution, "marginal value not finite");
  }
  check_probs(probs, "marginal");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] <= 1e-12) {
      throw Error(ErrorCode::invalid_distribution, "marginal values must be distinct");
    }
  }
}

double Marginal::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) m += probs[i] * values[i];
  return m;
}

double Marginal::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) v += probs[i] * (values[i] - m) * (values[i] - m);
  return v;
}

DiscreteVectorDistribution::DiscreteVectorDistribution(std::vector<std::vector<double>> atoms,
                                                       std::vector<double> probs)
    : atoms_(std::move(atoms)), probs_(std::move(probs)) {
  if (atoms_.empty() || atoms_.size() != probs_.size()) {
    throw Error(ErrorCode::invalid_distribution, "atoms and probs must match in size");
  }
  dim_ = atoms_.front().size();
  if (dim_ == 0) throw Error(ErrorCode::invalid_distribution, "atoms must have dimension >= 1");
  for (const auto& a : atoms_) {
    if (a.size() != dim_) throw Error(ErrorCode::invalid_distribution, "atoms differ in dimension");
    for (double x : a) {
      if (!std::isfinite(x)) throw Error(ErrorCode::invalid_distribution, "atom not finite");
    }
  }
  check_probs(probs_, "atoms");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      double gap = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) gap = std::max(gap, std::abs(atoms_[i][k] - atoms_[j][k]));
      if (gap <= 1e-12) {
        std::ostringstream os;
        os << "atoms " << i << " and " << j << " coincide";
        throw Error(ErrorCode::invalid_distribution, os.str());
      }
    }
  }
}

double DiscreteVectorDistribution::entropy() const { return discrete_entropy(probs_); }

Marginal DiscreteVectorDistribution::marginal(std::size_t j) const {
  if (j >= dim_) throw Error(ErrorCode::invalid_argument, "marginal index out of range");
  std::vector<std::size_t> idx(size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return atoms_[a][j] < atoms_[b][j]; });
  Marginal m;
  for (std::size_t i : idx) {
    const double v = atoms_[i][j];
    if (!m.values.empty() && v - m.values.back() <= 1e-12) {
      m.probs.back() += probs_[i];
    } else {
      m.values.push_back(v);
      m.probs.push_back(probs_[i]);
    }
  }
  return m;
}

DiscreteVectorDistribution product_distribution(const std::vector<Marginal>& marginals) {
  if (marginals.empty()) throw Error(ErrorCode::invalid_distribution, "no marginals");
  for (const auto& m : marginals) m.validate();

  std::vector<std::vector<double>> atoms{{}};
  std::vector<double> probs{1.0};
  for (const auto& m : marginals) {
    std::vector<std::vector<double>> next_atoms;
    std::vector<double> next_probs;
    next_atoms.reserve(atoms.size() * m.values.size());
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      for (std::size_t v = 0; v < m.values.size(); ++v) {
        auto atom = atoms[a];
        atom.push_back(m.values[v]);
        next_atoms.push_back(std::move(atom));
        next_probs.push_back(probs[a] * m.probs[v]);
      }
    }
    atoms = std::move(next_atoms);
    probs = std::move(next_probs);
  }
  // Products of exact marginals can drift by a few ulps; renormalize.
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& p : probs) p /= total;
  return DiscreteVectorDistribution(std::move(atoms), std::move(probs));
}

double default_merge_tol(const DiscreteVectorDistribution& u) {
  double spread = 0.0;
  for (std::size_t k = 0; k < u.dim(); ++k) {
    double lo = u.atom(0)[k], hi = lo;
    for (const auto& a : u.atoms()) {
      lo = std::min(lo, a[k]);
      hi = std::max(hi, a[k]);
    }
    spread = std::max(spread, hi - lo);
  }
  return 1e-9 * spread;
}

ProjectionSpectrum project(const DiscreteVectorDistribution& u, std::span<const double> w,
                           double merge_tol) {
  if (w.size() != u.dim()) throw Error(ErrorCode::invalid_argument, "direction has wrong dimension");
  if (!(merge_tol >= 0.0)) throw Error(ErrorCode::invalid_argument, "merge_tol must be >= 0");
  const double norm = std::sqrt(dot(w, w));
  if (!(std::abs(norm - 1.0) <= 1e-9)) {
    std::ostringstream os;
    os.precision(17);
    os << "direction norm is " << norm;
    throw Error(ErrorCode::not_unit_norm, os.str());
  }

  std::vector<std::pair<double, double>> vp(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) vp[i] = {dot(w, u.atom(i)), u.probs()[i]};
  std::sort(vp.begin(), vp.end());

  ProjectionSpectrum s;
  s.merge_tol = merge_tol;
  std::size_t i = 0;
  while (i < vp.size()) {
    double p = 0.0, pv = 0.0;
    std::size_t j = i;
    do {
      p += vp[j].second;
      pv += vp[j].second * vp[j].first;
      ++j;
    } while (j < vp.size() && vp[j].first - vp[j - 1].first <= merge_tol);
    s.values.push_back(j - i == 1 ? vp[i].first : pv / p);
    s.probs.push_back(p);
    i = j;
  }
  return s;
}

double projection_entropy(const DiscreteVectorDistribution& u, std::span<const double> w,
                          double merge_tol) {
  return discrete_entropy(project(u, w, merge_tol).probs);
}

std::vector<double> direction_from_theta(double theta) {
  return {std::sin(theta), std::cos(theta)};
}

namespace {

// Candidate directions are reported, so drop cos(π/2)-style residues.
std::vector<double> clean_direction(std::vector<double> w) {
  for (double& x : w) {
    if (std::abs(x) <= 1e-15) x = 0.0;
  }
  return w;
}

}  // namespace

double theta_from_direction(std::span<const double> w) {
  if (w.size() != 2) throw Error(ErrorCode::invalid_argument, "angle needs a 2-vector");
  return canonical_angle(std::atan2(w[0], w[1]));
}

std::vector<CandidateDirection> candidate_directions_2d(const DiscreteVectorDistribution& u,
                                                        double merge_tol) {
  if (u.dim() != 2) throw Error(ErrorCode::invalid_argument, "candidate_directions_2d needs K = 2");
  std::vector<double> angles;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      const double d1 = u.atom(i)[0] - u.atom(j)[0];
      const double d2 = u.atom(i)[1] - u.atom(j)[1];
      // sin θ d1 + cos θ d2 = 0
      angles.push_back(canonical_angle(std::atan2(-d2, d1)));
    }
  }
  std::sort(angles.begin(), angles.end());

  std::vector<double> unique;
  for (double a : angles) {
    if (unique.empty() || a - unique.back() > kAngleTol) unique.push_back(a);
  }
  if (unique.size() > 1 && unique.front() + kPi - unique.back() <= kAngleTol) unique.pop_back();

  std::vector<CandidateDirection> out;
  for (double theta : unique) {
    CandidateDirection c = make_candidate(u, clean_direction(direction_from_theta(theta)), merge_tol);
    if (c.entropy_drop > kDropTol) out.push_back(std::move(c));
  }
  return out;
}

std::vector<CandidateDirection> candidate_directions_2d(const DiscreteVectorDistribution& u) {
  return candidate_directions_2d(u, default_merge_tol(u));
}

std::vector<CandidateDirection> candidate_directions_axes(const DiscreteVectorDistribution& u,
                                                          double merge_tol) {
  if (u.dim() < 2) throw Error(ErrorCode::invalid_argument, "axis candidates need K >= 2");
  std::vector<CandidateDirection> out;
  for (std::size_t j = 0; j < u.dim(); ++j) {
    if (u.marginal(j).values.size() < 2) {
      std::ostringstream os;
      os << "component " << j << " is constant";
      throw Error(ErrorCode::degenerate_marginal, os.str());
    }
    std::vector<double> w(u.dim(), 0.0);
    w[j] = 1.0;
    out.push_back(make_candidate(u, std::move(w), merge_tol));
  }
  return out;
}

std::vector<CandidateDirection> candidate_directions_axes(const DiscreteVectorDistribution& u) {
  return candidate_directions_axes(u, default_merge_tol(u));
}

std::optional<std::vector<CandidateDirection>> candidate_directions_general(
    const DiscreteVectorDistribution& u, double merge_tol, std::size_t max_atoms) {
  const std::size_t k = u.dim();
  if (k < 2) throw Error(ErrorCode::invalid_argument, "candidates need K >= 2");
  if (u.size() > max_atoms) return std::nullopt;
  if (u.size() < k) return std::vector<CandidateDirection>{};

  std::vector<std::vector<double>> normals;
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  while (true) {
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<double> d(k);
      for (std::size_t c = 0; c < k; ++c) d[c] = u.atom(pick[r])[c] - u.atom(pick[0])[c];
      rows.push_back(std::move(d));
    }
    if (auto n = normal_of(rows, k); !n.empty()) normals.push_back(std::move(n));

    // Next K-subset in lexicographic order.
    std::size_t r = k;
    while (r > 0 && pick[r - 1] == u.size() - k + r - 1) --r;
    if (r == 0) break;
    ++pick[r - 1];
    for (std::size_t s = r; s < k; ++s) pick[s] = pick[s - 1] + 1;
  }

  std::sort(normals.begin(), normals.end());
  std::vector<std::vector<double>> unique;
  for (auto& n : normals) {
    bool dup = false;
    for (const auto& m : unique) {
      double gap = 0.0;
      for (std::size_t c = 0; c < k; ++c) gap = std::max(gap, std::abs(n[c] - m[c]));
      if (gap <= kAngleTol) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(std::move(n));
  }

  std::vector<CandidateDirection> out;
  for (auto& n : unique) {
    CandidateDirection c = make_candidate(u, std::move(n), merge_tol);
    if (c.entropy_drop > kDropTol) out.push_back(std::move(c));
  }
  return out;
}

Lemma2Report verify_lemma2(const DiscreteVectorDistribution& u, const CandidateDirection& cand,
                           double radius, int grid, double merge_tol) {
  const std::size_t k = u.dim();
  if (cand.w_star.size() != k) throw Error(ErrorCode::invalid_argument, "candidate has wrong dimension");
  if (!(radius > 0.0 && radius < kPi / 2)) {
    throw Error(ErrorCode::invalid_argument, "radius must lie in (0, π/2)");
  }
  if (grid < 2) throw Error(ErrorCode::invalid_argument, "grid must be >= 2");

  // Other candidates inside the neighborhood make the sampled gap meaningless.
  std::vector<CandidateDirection> others;
  if (k == 2) {
    others = candidate_directions_2d(u, merge_tol);
  } else if (auto general = candidate_directions_general(u, merge_tol)) {
    others = std::move(*general);
  } else {
    others = candidate_directions_axes(u, merge_tol);
  }
  for (const auto& o : others) {
    const double c = std::min(1.0, std::abs(dot(o.w_star, cand.w_star)));
    const double angle = std::acos(c);
    if (angle > kAngleTol && angle <= radius) {
      std::ostringstream os;
      os.precision(17);
      os << "another candidate lies " << angle << " rad away";
      throw Error(ErrorCode::neighborhood_contains_other_candidate, os.str());
    }
  }

  // Orthonormal complement of w*: directions to walk away from it.
  std::vector<std::vector<double>> tangents;
  if (k == 2) {
    tangents.push_back({cand.w_star[1], -cand.w_star[0]});
  } else {
    std::vector<std::vector<double>> basis{cand.w_star};
    for (std::size_t e = 0; e < k && basis.size() < k; ++e) {
      std::vector<double> v(k, 0.0);
      v[e] = 1.0;
      for (const auto& b : basis) {
        const double c = dot(v, b);
        for (std::size_t i = 0; i < k; ++i) v[i] -= c * b[i];
      }
      const double n = std::sqrt(dot(v, v));
      if (n < 1e-8) continue;
      for (double& x : v) x /= n;
      basis.push_back(v);
      tangents.push_back(std::move(v));
    }
  }

  const double h_star = projection_entropy(u, cand.w_star, merge_tol);
  const double h_u = u.entropy();
  Lemma2Report r;
  r.min_gap = std::numeric_limits<double>::infinity();
  r.min_entropy = std::numeric_limits<double>::infinity();
  r.max_entropy = -std::numeric_limits<double>::infinity();
  bool strong = true;
  std::vector<double> w(k);
  for (const auto& t : tangents) {
    for (int i = 0; i < grid; ++i) {
      const double a = -radius + 2.0 * radius * i / (grid - 1);
      if (std::abs(a) <= kAngleTol) continue;
      for (std::size_t c = 0; c < k; ++c) w[c] = std::cos(a) * cand.w_star[c] + std::sin(a) * t[c];
      const double norm = std::sqrt(dot(w, w));
      for (double& x : w) x /= norm;
      const double h = projection_entropy(u, w, merge_tol);
      ++r.samples;
      r.min_gap = std::min(r.min_gap, h - h_star);
      r.min_entropy = std::min(r.min_entropy, h);
      r.max_entropy = std::max(r.max_entropy, h);
      if (std::abs(h - h_u) > 1e-12) strong = false;
    }
  }
  if (k == 2) r.strong_form = strong;
  return r;
}

}  // namespace entland
