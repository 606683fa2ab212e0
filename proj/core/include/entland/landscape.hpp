#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entland/density.hpp"
#include "entland/discrete.hpp"
#include "entland/quadrature.hpp"
#include "entland/sources.hpp"

namespace entland {

/// Shape of the noise kernel shared by every mode of wS.
enum class NoiseShape {
  gaussian,
  uniform,
  uniform_gaussian,
  /// Two uniforms, no gaussian part.
  trapezoid,
};

const char* to_string(NoiseShape shape) noexcept;

/// Density of wS = wU + (noise): the merged projection spectrum convolved
/// with one noise kernel.
class OutputDensity {
 public:
  /// Throws InvalidArgument for noise combinations without a closed form
  /// (more than two uniforms, or two uniforms plus a gaussian part).
  OutputDensity(ProjectionSpectrum spectrum, NoiseKernel noise);

  const ProjectionSpectrum& spectrum() const { return spectrum_; }
  const NoiseKernel& noise() const { return noise_; }
  NoiseShape shape() const { return shape_; }

  double noise_pdf(double x) const;
  double pdf(double y) const;
  /// Jumps and kinks of the pdf; for uniform*gaussian, the smoothed edges.
  std::vector<double> breakpoints() const;
  /// [min value - r, max value + r] with r = half_width_sigmas · noise stddev.
  QuadratureSpec quadrature(const QuadratureRule& rule) const;
  double entropy(const QuadratureRule& rule) const;
  /// Gaussian shape only: the equal-scale gaussian mixture.
  MixtureDensity mixture() const;

 private:
  ProjectionSpectrum spectrum_;
  NoiseKernel noise_;
  NoiseShape shape_;
};

OutputDensity output_density(const SourceModel& s, std::span<const double> w, double merge_tol);

struct ScanOptions {
  int grid_size = 2048;
  QuadratureRule rule;
  /// Defaults to default_merge_tol of the model's atoms.
  std::optional<double> merge_tol;

  void validate() const;
  double merge_tol_for(const SourceModel& s) const;
};

/// Entropy and bounds at one direction. The bounds are the approximator and
/// the closed-form lower bound of the output mixture; they are NaN unless
/// the noise is purely gaussian.
struct ScanPoint {
  double entropy = 0.0;
  double upper = 0.0;
  double lower = 0.0;
};

ScanPoint evaluate_direction(const SourceModel& s, std::span<const double> w,
                             const ScanOptions& opts = {});
ScanPoint evaluate_theta(const SourceModel& s, double theta, const ScanOptions& opts = {});

enum class MinimumClass { non_mixing, mixing };

const char* to_string(MinimumClass c) noexcept;

struct LandscapeMinimum {
  std::size_t index = 0;
  double theta = 0.0;
  double value = 0.0;
  MinimumClass cls = MinimumClass::non_mixing;
};

struct LandscapeScan {
  std::vector<double> thetas;
  std::vector<double> entropy;
  std::vector<double> upper;
  std::vector<double> lower;
  std::vector<LandscapeMinimum> minima;
  std::vector<std::size_t> maxima;

  double step() const;
  std::vector<LandscapeMinimum> mixing_minima() const;
};

/// θ_i = iπ/G for i < G. Points are evaluated in parallel; each is a pure
/// function of θ_i so the result matches a sequential run bit for bit.
LandscapeScan scan_theta(const SourceModel& s, const ScanOptions& opts = {});

/// Cyclic strict local minima. Neighbors within 1e-12 form a plateau, which
/// is reported once at its first index. A constant curve has none.
std::vector<std::size_t> detect_local_minima(std::span<const double> values);
std::vector<std::size_t> detect_local_maxima(std::span<const double> values);

/// A run of cyclically consecutive tied grid points.
struct Plateau {
  std::size_t first = 0;
  std::size_t length = 1;

  bool contains(std::size_t i, std::size_t n) const { return (i + n - first) % n < length; }
};

/// The plateaus behind detect_local_minima (or maxima) with their extent.
std::vector<Plateau> extremal_plateaus(std::span<const double> values, bool minima);

/// Non-mixing when θ is within 1.5 grid steps of a multiple of π/2.
MinimumClass classify_angle(double theta, double grid_step);

struct TaylorCheck {
  double numeric = 0.0;
  double analytic = 0.0;
  double relative_error = 0.0;
};

/// Second central difference of θ ↦ H(w_θ S) at the axis of source j,
/// against var(S_j)·J(S_j) - 1. Needs K = 2, gaussian kernels
/// (NonSmoothKernel otherwise) and equal source variances.
TaylorCheck taylor_curvature_check(const SourceModel& s, std::size_t j, double h_step,
                                   const ScanOptions& opts = {});

struct SweepEntry {
  double sigma = 0.0;
  LandscapeScan scan;
  /// max over θ of |H(θ) - ln√(2πe) - ln σ|.
  double flatness = 0.0;
};

std::vector<SweepEntry> sigma_sweep(const SourceModel& s, std::span<const double> sigmas,
                                    const ScanOptions& opts = {});

struct SymmetryCheck {
  bool premise = false;
  /// Largest deviation found; NaN when the premise did not hold.
  double max_deviation = 0.0;
  bool passed = false;
  std::string detail;
};

struct SymmetryReport {
  /// H(θ) = H(θ + π).
  SymmetryCheck sign;
  /// H(θ) = H(-θ), if some source is symmetric.
  SymmetryCheck mirror;
  /// H(θ) = H(π/2 - θ), if both sources share one centered law.
  SymmetryCheck exchange;
  /// Mixing minima come in pairs θ, π - θ (within one grid step).
  SymmetryCheck paired_minima;
};

SymmetryReport symmetry_checks(const SourceModel& s, const LandscapeScan& scan,
                               const ScanOptions& opts = {}, double tol = 1e-6);
SymmetryReport symmetry_checks(const SourceModel& s, const ScanOptions& opts = {},
                               double tol = 1e-6);

/// True if the discrete part of source k is symmetric about its mean.
bool source_is_symmetric(const SourceModel& s, std::size_t k);

/// Uniformly random unit vector orthogonal to w_star.
std::vector<double> random_orthogonal_direction(std::span<const double> w_star, SplitMix64& rng);

struct GreatCircleScan {
  std::vector<double> w_star;
  std::vector<double> v;
  /// w(t) = cos t · w_star + sin t · v, t_i = iπ/G.
  std::vector<double> t;
  std::vector<double> entropy;
  std::vector<double> upper;
  std::vector<double> lower;
  std::vector<std::size_t> minima;
};

/// K > 2 landscape slice through a chosen direction.
GreatCircleScan scan_great_circle(const SourceModel& s, std::span<const double> w_star,
                                  std::span<const double> v, const ScanOptions& opts = {});

struct ParzenScan {
  std::vector<double> thetas;
  std::vector<double> entropy;
  std::vector<std::size_t> minima;
};

/// Draws `samples` vectors from the model with SplitMix64(seed), projects
/// them on w_θ, standardizes each projection to unit variance and takes the
/// Parzen entropy.
ParzenScan parzen_scan(const SourceModel& s, std::size_t samples, std::uint64_t seed,
                       const ScanOptions& opts = {});

}  // namespace entland
