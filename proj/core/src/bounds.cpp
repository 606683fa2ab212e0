#include "entland/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "entland/error.hpp"

namespace entland {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt2Pi = 2.5066282746310005024;

std::vector<std::size_t> order_by_location(const MixtureDensity& m) {
  std::vector<std::size_t> idx(m.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return m.locations()[a] < m.locations()[b];
  });
  return idx;
}

}  // namespace

const OmegaInterval& OmegaPartition::for_component(std::size_t n) const {
  for (const auto& iv : intervals) {
    if (iv.component == n) return iv;
  }
  throw Error(ErrorCode::invalid_argument, "partition has no interval for component");
}

double approximator(const MixtureDensity& m) {
  double h = m.kernel().entropy();
  for (std::size_t n = 0; n < m.size(); ++n) h += m.weights()[n] * std::log(m.scales()[n]);
  return h + discrete_entropy(m.weights());
}

OmegaPartition omega_partition(const MixtureDensity& m, const QuadratureSpec& q) {
  q.validate();
  const auto idx = order_by_location(m);
  const auto mu = [&](std::size_t k) { return m.locations()[idx[k]]; };
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (mu(k) - mu(k - 1) <= 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "locations " << mu(k - 1) << " and " << mu(k) << " coincide";
      throw Error(ErrorCode::duplicate_locations, os.str());
    }
  }

  OmegaPartition part;
  part.intervals.reserve(idx.size());
  if (idx.size() == 1) {
    part.intervals.push_back({q.lo, q.hi, idx[0], kInf});
    return part;
  }
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double left = k == 0 ? kInf : mu(k) - mu(k - 1);
    const double right = k + 1 == idx.size() ? kInf : mu(k + 1) - mu(k);
    const double d = std::min(left, right);
    part.intervals.push_back({mu(k) - 0.5 * d, mu(k) + 0.5 * d, idx[k], d});
  }
  return part;
}

OmegaPartition omega_partition(const MixtureDensity& m) {
  return omega_partition(m, default_quadrature(m));
}

namespace {

struct OverlapSums {
  OverlapTerms terms;
  std::vector<double> mass;
};

OverlapSums overlap_sums(const MixtureDensity& m, const OmegaPartition& part,
                         const QuadratureNodes& nodes) {
  OverlapSums s;
  s.terms.eps.assign(m.size(), 0.0);
  s.terms.eps_prime.assign(m.size(), 0.0);
  s.mass.assign(m.size(), 0.0);
  for (std::size_t n = 0; n < m.size(); ++n) {
    const OmegaInterval& omega = part.for_component(n);
    const double sup = m.kernel().sup() / m.scales()[n];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double y = nodes.y[i];
      const double k = m.component_pdf(n, y);
      s.mass[n] += k * nodes.w[i];
      if (y > omega.lo && y < omega.hi) continue;
      s.terms.eps[n] += k * nodes.w[i];
      if (k >= kDensityFloor) s.terms.eps_prime[n] += k * std::log(sup / k) * nodes.w[i];
    }
  }
  return s;
}

}  // namespace

OverlapTerms overlap_terms_numeric(const MixtureDensity& m, const OmegaPartition& part,
                                   const QuadratureSpec& q) {
  q.validate();
  std::vector<double> cuts = m.breakpoints();
  for (const auto& iv : part.intervals) {
    cuts.push_back(iv.lo);
    cuts.push_back(iv.hi);
  }
  // The Ω edges cut smooth integrands, which leaves the midpoint rule with
  // an O(h²) edge error. One Richardson step (h and h/2) removes it.
  const QuadratureNodes nodes = midpoint_nodes(q, cuts);
  QuadratureNodes halved;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double w = 0.5 * nodes.w[i];
    halved.y.insert(halved.y.end(), {nodes.y[i] - 0.5 * w, nodes.y[i] + 0.5 * w});
    halved.w.insert(halved.w.end(), {w, w});
  }
  const OverlapSums coarse = overlap_sums(m, part, nodes);
  const OverlapSums refined = overlap_sums(m, part, halved);

  OverlapTerms terms;
  terms.eps.resize(m.size());
  terms.eps_prime.resize(m.size());
  for (std::size_t n = 0; n < m.size(); ++n) {
    if (refined.mass[n] < 1.0 - kMassTolerance) {
      std::ostringstream os;
      os << "component " << n << " has mass " << refined.mass[n] << " inside the quadrature range";
      throw Error(ErrorCode::range_too_narrow, os.str());
    }
    terms.eps[n] = std::max(0.0, (4.0 * refined.terms.eps[n] - coarse.terms.eps[n]) / 3.0);
    terms.eps_prime[n] = (4.0 * refined.terms.eps_prime[n] - coarse.terms.eps_prime[n]) / 3.0;
  }
  return terms;
}

OverlapTerms overlap_terms_gaussian(const MixtureDensity& m, const OmegaPartition& part) {
  if (!m.kernel().is_gaussian()) {
    throw Error(ErrorCode::invalid_argument, "closed-form overlap terms need a gaussian kernel");
  }
  OverlapTerms terms;
  terms.eps.assign(m.size(), 0.0);
  terms.eps_prime.assign(m.size(), 0.0);
  for (std::size_t n = 0; n < m.size(); ++n) {
    const double d = part.for_component(n).gap;
    if (!std::isfinite(d)) continue;
    const double s = m.scales()[n];
    const double z = d / (2.0 * kSqrt2 * s);
    const double tail = std::erfc(z);
    terms.eps[n] = tail;
    terms.eps_prime[n] = 0.5 * tail + d / (2.0 * kSqrt2Pi * s) * std::exp(-z * z);
  }
  return terms;
}

double gaussian_partial_entropy(double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::invalid_argument, "alpha must be nonnegative");
  if (std::isinf(alpha)) return kGaussianEntropy;
  const double z = alpha / (2.0 * kSqrt2);
  return std::erf(z) * kGaussianEntropy - alpha / (2.0 * kSqrt2Pi) * std::exp(-z * z);
}

double lower_bound(const MixtureDensity& m, const OverlapTerms& terms) {
  if (terms.eps.size() != m.size() || terms.eps_prime.size() != m.size()) {
    throw Error(ErrorCode::invalid_argument, "overlap terms do not match the mixture");
  }
  const double sup_k = m.kernel().sup();
  double max_sup = 0.0;
  for (double s : m.scales()) max_sup = std::max(max_sup, sup_k / s);

  double slack = 0.0;
  for (std::size_t n = 0; n < m.size(); ++n) {
    const double pi = m.weights()[n];
    const double sup_n = sup_k / m.scales()[n];
    slack += pi * terms.eps_prime[n];
    slack += pi * (std::log(max_sup / (pi * sup_n)) + 1.0) * terms.eps[n];
  }
  return approximator(m) - slack;
}

namespace {

std::size_t top_component(const MixtureDensity& m, double y) {
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t n = 0; n < m.size(); ++n) {
    const double v = m.weights()[n] * m.component_pdf(n, y);
    if (v > best_v) {
      best_v = v;
      best = n;
    }
  }
  return best;
}

double non_maximal_sum(const MixtureDensity& m, const QuadratureNodes& nodes) {
  std::vector<double> terms(m.size());
  double pe = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t n = 0; n < m.size(); ++n) {
      terms[n] = m.weights()[n] * m.component_pdf(n, nodes.y[i]);
    }
    const auto top = std::max_element(terms.begin(), terms.end());
    double rest = 0.0;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
      if (it != top) rest += *it;
    }
    pe += rest * nodes.w[i];
  }
  return pe;
}

// Points where the most probable component changes, located by bisection
// between neighbouring nodes. The integrand has a kink there.
std::vector<double> decision_boundaries(const MixtureDensity& m, const QuadratureNodes& nodes) {
  std::vector<double> cuts;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    double a = nodes.y[i - 1], b = nodes.y[i];
    const std::size_t ta = top_component(m, a);
    if (top_component(m, b) == ta) continue;
    for (int it = 0; it < 60 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
      const double mid = 0.5 * (a + b);
      (top_component(m, mid) == ta ? a : b) = mid;
    }
    cuts.push_back(0.5 * (a + b));
  }
  return cuts;
}

}  // namespace

double bayes_error(const MixtureDensity& m, const QuadratureSpec& q) {
  if (m.size() == 1) return 0.0;
  std::vector<double> cuts = m.breakpoints();
  const std::vector<double> switches = decision_boundaries(m, mixture_nodes(m, q));
  cuts.insert(cuts.end(), switches.begin(), switches.end());
  std::sort(cuts.begin(), cuts.end());
  const QuadratureNodes nodes = midpoint_nodes(q, cuts);
  QuadratureNodes halved;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double w = 0.5 * nodes.w[i];
    halved.y.insert(halved.y.end(), {nodes.y[i] - 0.5 * w, nodes.y[i] + 0.5 * w});
    halved.w.insert(halved.w.end(), {w, w});
  }
  const double coarse = non_maximal_sum(m, nodes);
  const double fine = non_maximal_sum(m, halved);
  return std::clamp((4.0 * fine - coarse) / 3.0, 0.0, 1.0);
}

double bayes_error(const MixtureDensity& m) { return bayes_error(m, default_quadrature(m)); }

DecisionBounds decision_bounds(const MixtureDensity& m, double pe) {
  if (!(pe >= 0.0 && pe <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "probability of error must lie in [0, 1]");
  }
  const double h = approximator(m);
  const double n_minus_1 = static_cast<double>(m.size() - 1);
  return {h - 2.0 * std::numbers::ln2 * pe, h - 2.0 * std::sqrt(n_minus_1 * pe)};
}

MixtureDensity merge_close_components(const MixtureDensity& m, double rel_tol) {
  const double tol = rel_tol * m.max_scale();
  const auto idx = order_by_location(m);
  std::vector<double> w, loc, sc;
  std::size_t k = 0;
  while (k < idx.size()) {
    double ws = 0.0, ls = 0.0, ss = 0.0;
    std::size_t j = k;
    do {
      const std::size_t n = idx[j];
      ws += m.weights()[n];
      ls += m.weights()[n] * m.locations()[n];
      ss += m.weights()[n] * m.scales()[n];
      ++j;
    } while (j < idx.size() &&
             m.locations()[idx[j]] - m.locations()[idx[j - 1]] <= tol);
    w.push_back(ws);
    loc.push_back(ls / ws);
    sc.push_back(ss / ws);
    k = j;
  }
  return MixtureDensity(std::move(w), std::move(loc), std::move(sc), m.kernel());
}

EntropyBoundsReport entropy_bounds(const MixtureDensity& m, const QuadratureSpec& q,
                                   bool with_decision) {
  const MixtureDensity merged = merge_close_components(m);
  EntropyBoundsReport r;
  r.approximator = approximator(merged);
  r.partition = omega_partition(merged, q);
  r.overlap = merged.kernel().is_gaussian() ? overlap_terms_gaussian(merged, r.partition)
                                            : overlap_terms_numeric(merged, r.partition, q);
  r.lower = lower_bound(merged, r.overlap);
  if (with_decision) {
    const double pe = std::clamp(bayes_error(merged, q), 0.0, 1.0);
    const DecisionBounds db = decision_bounds(merged, pe);
    r.bayes_error = pe;
    r.decision_upper = db.upper;
    r.decision_lower = db.lower;
  }
  return r;
}

}  // namespace entland
