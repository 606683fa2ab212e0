#include "entland/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "entland/bounds.hpp"
#include "entland/error.hpp"

namespace entland {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTieTol = 1e-12;
// Cells per segment for non-gaussian output densities, whose pdf has jumps,
// kinks or steep erfc edges.
constexpr int kSharpSegmentCells = 64;
// Smoothed uniform edges: windows of ±8 sd around each edge get cells of
// sd/16, but only while the windows are narrow against the uniform itself.
// Wider windows would overlap and their junctions would cost O(h²).
constexpr double kEdgeWindow = 8.0;
constexpr double kSharpEdgeRatio = 0.5;
constexpr double kEdgeCellsPerSd = 16.0;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

NoiseShape shape_of(const NoiseKernel& n) {
  const std::size_t u = n.uniform_half_widths.size();
  const bool g = n.gauss_sd > 0.0;
  if (u == 0 && g) return NoiseShape::gaussian;
  if (u == 1) return g ? NoiseShape::uniform_gaussian : NoiseShape::uniform;
  if (u == 2 && !g) return NoiseShape::trapezoid;
  std::ostringstream os;
  os << "no closed form for " << u << " uniform noise terms"
     << (g ? " plus a gaussian part" : "");
  throw Error(ErrorCode::invalid_argument, os.str());
}

// Uniform cells of at most `fine` inside the union of [e - half, e + half]
// over the edges, and the coarse rule of q elsewhere. Overlapping windows are
// merged so every smooth stretch is covered by one equal-step segment.
QuadratureNodes edge_refined_nodes(const QuadratureSpec& q, std::vector<double> edges, double half,
                                   double fine) {
  std::sort(edges.begin(), edges.end());
  std::vector<std::pair<double, double>> windows;
  for (double e : edges) {
    const double lo = std::max(q.lo, e - half);
    const double hi = std::min(q.hi, e + half);
    if (lo >= hi) continue;
    if (!windows.empty() && lo <= windows.back().second) {
      windows.back().second = std::max(windows.back().second, hi);
    } else {
      windows.emplace_back(lo, hi);
    }
  }

  QuadratureNodes nodes;
  const double coarse = q.step();
  const auto fill = [&](double a, double b, double h) {
    if (b <= a) return;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
    const double w = (b - a) / n;
    for (int i = 0; i < n; ++i) {
      nodes.y.push_back(a + (i + 0.5) * w);
      nodes.w.push_back(w);
    }
  };
  double cursor = q.lo;
  for (const auto& [lo, hi] : windows) {
    fill(cursor, lo, coarse);
    fill(lo, hi, std::min(fine, coarse));
    cursor = hi;
  }
  fill(cursor, q.hi, coarse);
  return nodes;
}

std::vector<Plateau> cyclic_extrema(std::span<const double> v, bool minima) {
  const std::size_t n = v.size();
  if (n < 3) throw Error(ErrorCode::invalid_argument, "extrema detection needs >= 3 points");
  const auto tied = [&](std::size_t i, std::size_t j) { return std::abs(v[i] - v[j]) <= kTieTol; };

  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!tied((i + n - 1) % n, i)) {
      start = i;
      break;
    }
  }
  if (start == n) return {};

  std::vector<Plateau> out;
  std::size_t i = start;
  std::size_t seen = 0;
  while (seen < n) {
    std::size_t len = 1;
    while (len < n && tied((i + len - 1) % n, (i + len) % n)) ++len;
    const double prev = v[(i + n - 1) % n];
    const double next = v[(i + len) % n];
    const double first = v[i];
    const double last = v[(i + len - 1) % n];
    const bool hit = minima ? (prev > first && next > last) : (prev < first && next < last);
    if (hit) out.push_back({i, len});
    seen += len;
    i = (i + len) % n;
  }
  std::sort(out.begin(), out.end(),
            [](const Plateau& a, const Plateau& b) { return a.first < b.first; });
  return out;
}

std::vector<std::size_t> firsts(const std::vector<Plateau>& plateaus) {
  std::vector<std::size_t> out;
  for (const auto& p : plateaus) out.push_back(p.first);
  return out;
}

double cyclic_distance(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

}  // namespace

const char* to_string(NoiseShape shape) noexcept {
  switch (shape) {
    case NoiseShape::gaussian: return "gaussian";
    case NoiseShape::uniform: return "uniform";
    case NoiseShape::uniform_gaussian: return "uniform*gaussian";
    case NoiseShape::trapezoid: return "trapezoid";
  }
  return "unknown";
}

const char* to_string(MinimumClass c) noexcept {
  return c == MinimumClass::mixing ? "mixing" : "non-mixing";
}

OutputDensity::OutputDensity(ProjectionSpectrum spectrum, NoiseKernel noise)
    : spectrum_(std::move(spectrum)), noise_(std::move(noise)), shape_(shape_of(noise_)) {}

double OutputDensity::noise_pdf(double x) const {
  const double ax = std::abs(x);
  switch (shape_) {
    case NoiseShape::gaussian: {
      const double z = x / noise_.gauss_sd;
      return kInvSqrt2Pi * std::exp(-0.5 * z * z) / noise_.gauss_sd;
    }
    case NoiseShape::uniform: {
      const double a = noise_.uniform_half_widths[0];
      return ax <= a ? 0.5 / a : 0.0;
    }
    case NoiseShape::uniform_gaussian: {
      // P(|x - V| small) for V uniform on [-a, a] smoothed by N(0, s²); both
      // erfc arguments are >= the true tail, so the difference keeps digits.
      const double a = noise_.uniform_half_widths[0];
      const double r = noise_.gauss_sd * std::numbers::sqrt2;
      return (0.5 * std::erfc((ax - a) / r) - 0.5 * std::erfc((ax + a) / r)) / (2.0 * a);
    }
    case NoiseShape::trapezoid: {
      const double a = noise_.uniform_half_widths[0];
      const double b = noise_.uniform_half_widths[1];
      if (ax <= a - b) return 0.5 / a;
      if (ax < a + b) return (a + b - ax) / (4.0 * a * b);
      return 0.0;
    }
  }
  return 0.0;
}

double OutputDensity::pdf(double y) const {
  double p = 0.0;
  for (std::size_t i = 0; i < spectrum_.size(); ++i) {
    p += spectrum_.probs[i] * noise_pdf(y - spectrum_.values[i]);
  }
  return p;
}

std::vector<double> OutputDensity::breakpoints() const {
  std::vector<double> out;
  for (double v : spectrum_.values) {
    switch (shape_) {
      case NoiseShape::gaussian:
        break;
      case NoiseShape::uniform: {
        const double a = noise_.uniform_half_widths[0];
        out.insert(out.end(), {v - a, v + a});
        break;
      }
      case NoiseShape::uniform_gaussian: {
        const double a = noise_.uniform_half_widths[0];
        out.insert(out.end(), {v - a, v + a});
        break;
      }
      case NoiseShape::trapezoid: {
        const double a = noise_.uniform_half_widths[0];
        const double b = noise_.uniform_half_widths[1];
        out.insert(out.end(), {v - a - b, v - a + b, v + a - b, v + a + b});
        break;
      }
    }
  }
  return out;
}

QuadratureSpec OutputDensity::quadrature(const QuadratureRule& rule) const {
  return rule.range_for(spectrum_.values.front(), spectrum_.values.back(), noise_.stddev());
}

double OutputDensity::entropy(const QuadratureRule& rule) const {
  const QuadratureSpec q = quadrature(rule);
  if (shape_ == NoiseShape::gaussian) return entropy_quadrature(mixture(), q);
  QuadratureNodes nodes;
  if (shape_ != NoiseShape::uniform_gaussian) {
    nodes = midpoint_nodes(q, breakpoints(), kSharpSegmentCells);
  } else if (kEdgeWindow * noise_.gauss_sd > kSharpEdgeRatio * noise_.uniform_half_widths[0]) {
    // Smooth on the scale of the grid: the plain rule is spectrally accurate.
    nodes = midpoint_nodes(q);
  } else {
    nodes = edge_refined_nodes(q, breakpoints(), kEdgeWindow * noise_.gauss_sd,
                               noise_.gauss_sd / kEdgeCellsPerSd);
  }
  std::vector<double> p(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) p[i] = pdf(nodes.y[i]);
  return entropy_on_nodes(nodes, p);
}

MixtureDensity OutputDensity::mixture() const {
  if (shape_ != NoiseShape::gaussian) {
    throw Error(ErrorCode::invalid_argument, "output density is not a gaussian mixture");
  }
  return MixtureDensity(spectrum_.probs, spectrum_.values,
                        std::vector<double>(spectrum_.size(), noise_.gauss_sd));
}

OutputDensity output_density(const SourceModel& s, std::span<const double> w, double merge_tol) {
  return OutputDensity(project(s.atoms(), w, merge_tol), s.noise(w));
}

void ScanOptions::validate() const {
  if (grid_size < 16) {
    std::ostringstream os;
    os << "grid_size " << grid_size << " is below the minimum of 16";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  rule.validate();
  if (merge_tol && !(*merge_tol >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "merge_tol must be >= 0");
  }
}

double ScanOptions::merge_tol_for(const SourceModel& s) const {
  return merge_tol ? *merge_tol : default_merge_tol(s.atoms());
}

ScanPoint evaluate_direction(const SourceModel& s, std::span<const double> w,
                             const ScanOptions& opts) {
  const OutputDensity od = output_density(s, w, opts.merge_tol_for(s));
  ScanPoint pt{od.entropy(opts.rule), kNaN, kNaN};
  if (od.shape() == NoiseShape::gaussian) {
    const EntropyBoundsReport r = entropy_bounds(od.mixture(), od.quadrature(opts.rule), false);
    pt.upper = r.approximator;
    pt.lower = r.lower;
  }
  return pt;
}

ScanPoint evaluate_theta(const SourceModel& s, double theta, const ScanOptions& opts) {
  if (s.dim() != 2) throw Error(ErrorCode::invalid_argument, "θ scans need K = 2");
  return evaluate_direction(s, direction_from_theta(theta), opts);
}

double LandscapeScan::step() const { return thetas.empty() ? 0.0 : kPi / thetas.size(); }

std::vector<LandscapeMinimum> LandscapeScan::mixing_minima() const {
  std::vector<LandscapeMinimum> out;
  for (const auto& m : minima) {
    if (m.cls == MinimumClass::mixing) out.push_back(m);
  }
  return out;
}

LandscapeScan scan_theta(const SourceModel& s, const ScanOptions& opts) {
  opts.validate();
  if (s.dim() != 2) throw Error(ErrorCode::invalid_argument, "θ scans need K = 2");
  const auto n = static_cast<std::size_t>(opts.grid_size);
  LandscapeScan scan;
  scan.thetas.resize(n);
  scan.entropy.resize(n);
  scan.upper.resize(n);
  scan.lower.resize(n);
  for (std::size_t i = 0; i < n; ++i) scan.thetas[i] = kPi * static_cast<double>(i) / n;

  parallel_for(n, [&](std::size_t i) {
    const ScanPoint pt = evaluate_theta(s, scan.thetas[i], opts);
    scan.entropy[i] = pt.entropy;
    scan.upper[i] = pt.upper;
    scan.lower[i] = pt.lower;
  });

  const double step = scan.step();
  for (std::size_t i : detect_local_minima(scan.entropy)) {
    scan.minima.push_back(
        {i, scan.thetas[i], scan.entropy[i], classify_angle(scan.thetas[i], step)});
  }
  scan.maxima = detect_local_maxima(scan.entropy);
  return scan;
}

std::vector<std::size_t> detect_local_minima(std::span<const double> values) {
  return firsts(cyclic_extrema(values, true));
}

std::vector<std::size_t> detect_local_maxima(std::span<const double> values) {
  return firsts(cyclic_extrema(values, false));
}

std::vector<Plateau> extremal_plateaus(std::span<const double> values, bool minima) {
  return cyclic_extrema(values, minima);
}

MinimumClass classify_angle(double theta, double grid_step) {
  return cyclic_distance(theta, 0.0, kPi / 2) <= 1.5 * grid_step ? MinimumClass::non_mixing
                                                                 : MinimumClass::mixing;
}

TaylorCheck taylor_curvature_check(const SourceModel& s, std::size_t j, double h_step,
                                   const ScanOptions& opts) {
  if (s.dim() != 2) throw Error(ErrorCode::invalid_argument, "the curvature check needs K = 2");
  if (j >= 2) throw Error(ErrorCode::invalid_argument, "source index must be 0 or 1");
  if (!(h_step > 0.0 && h_step < 0.5)) {
    throw Error(ErrorCode::invalid_argument, "h_step must lie in (0, 0.5)");
  }
  for (const auto& src : s.sources()) {
    if (!src.kernel.smooth()) {
      throw Error(ErrorCode::non_smooth_kernel, "the curvature check needs gaussian kernels");
    }
  }
  if (!s.equal_variances()) {
    throw Error(ErrorCode::invalid_argument, "the curvature check needs equal source variances");
  }

  // w = [sin θ, cos θ]: source 0 sits at θ = π/2, source 1 at θ = 0.
  const double axis = j == 0 ? kPi / 2 : 0.0;
  const double h0 = evaluate_theta(s, axis, opts).entropy;
  const double hp = evaluate_theta(s, axis + h_step, opts).entropy;
  const double hm = evaluate_theta(s, axis - h_step, opts).entropy;

  TaylorCheck t;
  t.numeric = (hp - 2.0 * h0 + hm) / (h_step * h_step);
  const MixtureDensity sj = s.source_density(j);
  t.analytic = s.source_variance(j) * fisher_information(sj, default_quadrature(sj, opts.rule)) - 1.0;
  const double diff = std::abs(t.numeric - t.analytic);
  t.relative_error = std::abs(t.analytic) > 1e-12 ? diff / std::abs(t.analytic) : diff;
  return t;
}

std::vector<SweepEntry> sigma_sweep(const SourceModel& s, std::span<const double> sigmas,
                                    const ScanOptions& opts) {
  std::vector<SweepEntry> out;
  for (double sigma : sigmas) {
    SweepEntry e;
    e.sigma = sigma;
    e.scan = scan_theta(s.with_noise_scale(sigma), opts);
    const double flat = kGaussianEntropy + std::log(sigma);
    for (double h : e.scan.entropy) e.flatness = std::max(e.flatness, std::abs(h - flat));
    out.push_back(std::move(e));
  }
  return out;
}

bool source_is_symmetric(const SourceModel& s, std::size_t k) {
  const Marginal m = s.atoms().marginal(k);
  const double mu = m.mean();
  double scale = 1.0;
  for (double v : m.values) scale = std::max(scale, std::abs(v));
  const std::size_t n = m.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = n - 1 - i;
    if (std::abs((m.values[i] - mu) + (m.values[r] - mu)) > 1e-12 * scale) return false;
    if (std::abs(m.probs[i] - m.probs[r]) > 1e-12) return false;
  }
  return true;
}

namespace {

bool identical_centered_laws(const SourceModel& s) {
  const SourceSpec& a = s.sources()[0];
  const SourceSpec& b = s.sources()[1];
  if (a.kernel != b.kernel || std::abs(a.sigma - b.sigma) > 1e-12) return false;
  const Marginal ma = s.atoms().marginal(0);
  const Marginal mb = s.atoms().marginal(1);
  if (ma.values.size() != mb.values.size()) return false;
  const double ca = ma.mean(), cb = mb.mean();
  for (std::size_t i = 0; i < ma.values.size(); ++i) {
    const double scale = std::max({1.0, std::abs(ma.values[i]), std::abs(mb.values[i])});
    if (std::abs((ma.values[i] - ca) - (mb.values[i] - cb)) > 1e-12 * scale) return false;
    if (std::abs(ma.probs[i] - mb.probs[i]) > 1e-12) return false;
  }
  return true;
}

SymmetryCheck compare_indices(const LandscapeScan& scan, double tol,
                              std::size_t (*partner)(std::size_t, std::size_t)) {
  SymmetryCheck c;
  c.premise = true;
  const std::size_t n = scan.entropy.size();
  for (std::size_t i = 0; i < n; ++i) {
    c.max_deviation =
        std::max(c.max_deviation, std::abs(scan.entropy[i] - scan.entropy[partner(i, n)]));
  }
  c.passed = c.max_deviation <= tol;
  return c;
}

SymmetryCheck not_applicable(const char* why) {
  SymmetryCheck c;
  c.max_deviation = kNaN;
  c.detail = why;
  return c;
}

}  // namespace

SymmetryReport symmetry_checks(const SourceModel& s, const LandscapeScan& scan,
                               const ScanOptions& opts, double tol) {
  if (s.dim() != 2) throw Error(ErrorCode::invalid_argument, "symmetry checks need K = 2");
  SymmetryReport r;
  const std::size_t n = scan.entropy.size();

  // w_{θ+π} = -w_θ, so evaluate the flipped directions explicitly.
  std::vector<double> flipped(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> w = direction_from_theta(scan.thetas[i]);
    for (double& x : w) x = -x;
    flipped[i] = evaluate_direction(s, w, opts).entropy;
  });
  r.sign.premise = true;
  for (std::size_t i = 0; i < n; ++i) {
    r.sign.max_deviation = std::max(r.sign.max_deviation, std::abs(scan.entropy[i] - flipped[i]));
  }
  r.sign.passed = r.sign.max_deviation <= tol;
  r.sign.detail = "H(theta) vs H(theta + pi)";

  if (source_is_symmetric(s, 0) || source_is_symmetric(s, 1)) {
    r.mirror = compare_indices(scan, tol, [](std::size_t i, std::size_t m) { return (m - i) % m; });
    r.mirror.detail = "H(theta) vs H(-theta)";
  } else {
    r.mirror = not_applicable("no source is symmetric");
  }

  if (!identical_centered_laws(s)) {
    r.exchange = not_applicable("sources differ after centering");
  } else if (n % 2 != 0) {
    r.exchange = not_applicable("grid size is odd, pi/2 - theta is off the grid");
  } else {
    r.exchange = compare_indices(
        scan, tol, [](std::size_t i, std::size_t m) { return (m / 2 + m - i) % m; });
    r.exchange.detail = "H(theta) vs H(pi/2 - theta)";
  }

  const auto mixing = scan.mixing_minima();
  if (mixing.empty()) {
    r.paired_minima = not_applicable("no mixing minima detected");
  } else {
    SymmetryCheck& c = r.paired_minima;
    c.premise = true;
    const double step = scan.step();
    for (const auto& m : mixing) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& o : mixing) best = std::min(best, cyclic_distance(o.theta, kPi - m.theta, kPi));
      c.max_deviation = std::max(c.max_deviation, best);
    }
    c.passed = c.max_deviation <= step * (1.0 + 1e-9);
    c.detail = "mixing minima at theta and pi - theta, within one grid step";
  }
  return r;
}

SymmetryReport symmetry_checks(const SourceModel& s, const ScanOptions& opts, double tol) {
  return symmetry_checks(s, scan_theta(s, opts), opts, tol);
}

std::vector<double> random_orthogonal_direction(std::span<const double> w_star, SplitMix64& rng) {
  if (w_star.size() < 2) throw Error(ErrorCode::invalid_argument, "need K >= 2");
  const double wn = std::sqrt(dot(w_star, w_star));
  if (std::abs(wn - 1.0) > 1e-9) throw Error(ErrorCode::not_unit_norm, "w_star is not unit norm");
  std::vector<double> v(w_star.size());
  while (true) {
    for (double& x : v) x = rng.normal();
    const double c = dot(v, w_star);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * w_star[k];
    const double n = std::sqrt(dot(v, v));
    if (n > 1e-8) {
      for (double& x : v) x /= n;
      return v;
    }
  }
}

GreatCircleScan scan_great_circle(const SourceModel& s, std::span<const double> w_star,
                                  std::span<const double> v, const ScanOptions& opts) {
  opts.validate();
  if (w_star.size() != s.dim() || v.size() != s.dim()) {
    throw Error(ErrorCode::invalid_argument, "directions have the wrong dimension");
  }
  if (std::abs(std::sqrt(dot(w_star, w_star)) - 1.0) > 1e-9 ||
      std::abs(std::sqrt(dot(v, v)) - 1.0) > 1e-9) {
    throw Error(ErrorCode::not_unit_norm, "great-circle directions must be unit vectors");
  }
  if (std::abs(dot(w_star, v)) > 1e-9) {
    throw Error(ErrorCode::invalid_argument, "great-circle directions must be orthogonal");
  }

  const auto n = static_cast<std::size_t>(opts.grid_size);
  GreatCircleScan g;
  g.w_star.assign(w_star.begin(), w_star.end());
  g.v.assign(v.begin(), v.end());
  g.t.resize(n);
  g.entropy.resize(n);
  g.upper.resize(n);
  g.lower.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.t[i] = kPi * static_cast<double>(i) / n;
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> w(s.dim());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::cos(g.t[i]) * w_star[k] + std::sin(g.t[i]) * v[k];
    const double norm = std::sqrt(dot(w, w));
    for (double& x : w) x /= norm;
    const ScanPoint pt = evaluate_direction(s, w, opts);
    g.entropy[i] = pt.entropy;
    g.upper[i] = pt.upper;
    g.lower[i] = pt.lower;
  });
  g.minima = detect_local_minima(g.entropy);
  return g;
}

ParzenScan parzen_scan(const SourceModel& s, std::size_t samples, std::uint64_t seed,
                       const ScanOptions& opts) {
  opts.validate();
  if (s.dim() != 2) throw Error(ErrorCode::invalid_argument, "θ scans need K = 2");
  if (samples < 2) throw Error(ErrorCode::degenerate_sample, "need at least 2 samples");

  SplitMix64 rng(seed);
  std::vector<std::vector<double>> draws(samples);
  for (auto& d : draws) d = s.sample(rng);

  const auto n = static_cast<std::size_t>(opts.grid_size);
  ParzenScan p;
  p.thetas.resize(n);
  p.entropy.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.thetas[i] = kPi * static_cast<double>(i) / n;
  parallel_for(n, [&](std::size_t i) {
    const std::vector<double> w = direction_from_theta(p.thetas[i]);
    std::vector<double> y(samples);
    for (std::size_t k = 0; k < samples; ++k) y[k] = dot(w, draws[k]);
    const SampleSet raw(y);
    const double mu = raw.mean();
    const double sd = raw.stddev();
    if (!(sd > 0.0)) throw Error(ErrorCode::degenerate_sample, "projection has zero variance");
    for (double& x : y) x = (x - mu) / sd;
    p.entropy[i] = parzen_entropy(SampleSet(std::move(y)), opts.rule);
  });
  p.minima = detect_local_minima(p.entropy);
  return p;
}

}  // namespace entland
