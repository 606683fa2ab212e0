#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "entland/discrete.hpp"
#include "entland/error.hpp"
#include "entland/landscape.hpp"
#include "entland/rng.hpp"
#include "entland/sources.hpp"

using entland::ErrorCode;
using entland::NoiseShape;
using entland::ScalarKernel;
using entland::SourceModel;
using entland::SourceSpec;
using entland::VarianceMode;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const entland::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no entland::Error thrown";
  return ErrorCode::invalid_argument;
}

SourceModel example6(double sigma) {
  return SourceModel(
      {SourceSpec::discrete({-2.0 / std::sqrt(3.0), std::sqrt(3.0) / 2.0}, {1.0 / 3.0, 2.0 / 3.0},
                            sigma),
       SourceSpec::discrete({-std::sqrt(2.0), std::sqrt(2.0) / 2.0}, {3.0 / 7.0, 4.0 / 7.0},
                            sigma)},
      VarianceMode::as_given, false);
}

entland::ScanOptions small_scan(int grid) {
  entland::ScanOptions o;
  o.grid_size = grid;
  return o;
}

double integrate(const entland::OutputDensity& d) {
  const auto q = d.quadrature({});
  const auto nodes = entland::midpoint_nodes(q, d.breakpoints(), 64);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += d.pdf(nodes.y[i]) * nodes.w[i];
  return s;
}

TEST(Extrema, CyclicMinimaAndMaxima) {
  const std::vector<double> v{3, 1, 2, 0, 2};
  EXPECT_EQ(entland::detect_local_minima(v), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(entland::detect_local_maxima(v), (std::vector<std::size_t>{0, 2}));
}

TEST(Extrema, WrapAround) {
  const std::vector<double> v{0, 1, 2, 1};
  EXPECT_EQ(entland::detect_local_minima(v), (std::vector<std::size_t>{0}));
  EXPECT_EQ(entland::detect_local_maxima(v), (std::vector<std::size_t>{2}));
}

TEST(Extrema, PlateauReportedOnce) {
  const std::vector<double> v{2, 1, 1 + 1e-14, 1, 3, 4};
  EXPECT_EQ(entland::detect_local_minima(v), (std::vector<std::size_t>{1}));
  const auto p = entland::extremal_plateaus(v, true);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].first, 1u);
  EXPECT_EQ(p[0].length, 3u);
  EXPECT_TRUE(p[0].contains(3, v.size()));
  EXPECT_FALSE(p[0].contains(4, v.size()));
}

TEST(Extrema, PlateauAcrossTheSeam) {
  const std::vector<double> v{5, 6, 7, 6, 5};
  const auto p = entland::extremal_plateaus(v, true);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].first, 4u);
  EXPECT_TRUE(p[0].contains(0, v.size()));
}

TEST(Extrema, ConstantCurveHasNone) {
  const std::vector<double> v(16, 1.25);
  EXPECT_TRUE(entland::detect_local_minima(v).empty());
  EXPECT_TRUE(entland::detect_local_maxima(v).empty());
}

TEST(Extrema, ClassifyAngle) {
  const double step = kPi / 64;
  EXPECT_EQ(entland::classify_angle(0.0, step), entland::MinimumClass::non_mixing);
  EXPECT_EQ(entland::classify_angle(kPi / 2 + step, step), entland::MinimumClass::non_mixing);
  EXPECT_EQ(entland::classify_angle(kPi - step, step), entland::MinimumClass::non_mixing);
  EXPECT_EQ(entland::classify_angle(kPi / 4, step), entland::MinimumClass::mixing);
}

TEST(OutputDensity, ShapesFollowKernels) {
  const auto w = entland::direction_from_theta(0.7);
  const double tol = 1e-12;
  const SourceModel gg({SourceSpec::gaussian(), SourceSpec::gaussian()});
  EXPECT_EQ(entland::output_density(gg, w, tol).shape(), NoiseShape::gaussian);
  const SourceModel uu({SourceSpec::uniform(), SourceSpec::uniform()});
  EXPECT_EQ(entland::output_density(uu, w, tol).shape(), NoiseShape::trapezoid);
  EXPECT_EQ(entland::output_density(uu, entland::direction_from_theta(0.0), tol).shape(),
            NoiseShape::uniform);
  const SourceModel ug({SourceSpec::uniform(), SourceSpec::gaussian()});
  EXPECT_EQ(entland::output_density(ug, w, tol).shape(), NoiseShape::uniform_gaussian);
}

TEST(OutputDensity, EveryShapeIntegratesToOne) {
  const double tol = 1e-12;
  const SourceModel models[] = {
      SourceModel({SourceSpec::uniform(), SourceSpec::uniform()}),
      SourceModel({SourceSpec::uniform(), SourceSpec::gaussian()}),
      SourceModel({SourceSpec::discrete({-1, 1}, {0.5, 0.5}, 0.1, ScalarKernel::uniform()),
                   SourceSpec::discrete({-1, 1}, {0.5, 0.5}, 0.1)}),
  };
  for (const auto& m : models) {
    for (double t : {0.0, 0.3, 1.0, kPi / 2}) {
      const auto d = entland::output_density(m, entland::direction_from_theta(t), tol);
      EXPECT_NEAR(integrate(d), 1.0, 1e-9) << to_string(d.shape()) << " θ=" << t;
    }
  }
}

TEST(OutputDensity, UniformGaussianMatchesConvolution) {
  const SourceModel m({SourceSpec::uniform(), SourceSpec::gaussian()});
  const double t = 0.6;
  const auto d = entland::output_density(m, entland::direction_from_theta(t), 1e-12);
  // Uniform of half-width √3 sin t convolved with N(0, cos² t).
  const double a = std::sqrt(3.0) * std::sin(t), s = std::cos(t);
  for (double y : {0.0, 0.5, a, 2.0}) {
    const int n = 200000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = -a + (i + 0.5) * 2 * a / n;
      acc += std::exp(-0.5 * (y - x) * (y - x) / (s * s)) / (s * std::sqrt(2 * kPi));
    }
    EXPECT_NEAR(d.pdf(y), acc / n, 1e-9) << y;
  }
}

TEST(OutputDensity, ThreeUniformsHaveNoClosedForm) {
  const SourceModel m({SourceSpec::uniform(), SourceSpec::uniform(), SourceSpec::uniform()});
  const std::vector<double> w{1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)};
  EXPECT_EQ(code_of([&] { entland::output_density(m, w, 1e-12); }), ErrorCode::invalid_argument);
}

TEST(Landscape, GaussianSourcesAreRotationInvariant) {
  const SourceModel m({SourceSpec::gaussian(), SourceSpec::gaussian()});
  const auto scan = entland::scan_theta(m, small_scan(32));
  for (double h : scan.entropy) EXPECT_NEAR(h, entland::kGaussianEntropy, 1e-9);
  EXPECT_TRUE(scan.minima.empty());
}

TEST(Landscape, UniformAxesAreMinima) {
  const SourceModel m({SourceSpec::uniform(), SourceSpec::uniform()});
  const auto scan = entland::scan_theta(m, small_scan(64));
  ASSERT_EQ(scan.minima.size(), 2u);
  EXPECT_EQ(scan.minima[0].index, 0u);
  EXPECT_EQ(scan.minima[1].index, 32u);
  EXPECT_NEAR(scan.minima[0].value, std::log(2 * std::sqrt(3.0)), 1e-9);
  for (const auto& mn : scan.minima) EXPECT_EQ(mn.cls, entland::MinimumClass::non_mixing);
}

TEST(Landscape, SignSymmetry) {
  const SourceModel m = example6(0.1);
  for (double t : {0.2, 1.1, 2.5}) {
    const auto w = entland::direction_from_theta(t);
    const std::vector<double> neg{-w[0], -w[1]};
    const auto a = entland::evaluate_direction(m, w);
    const auto b = entland::evaluate_direction(m, neg);
    EXPECT_NEAR(a.entropy, b.entropy, 1e-12) << t;
  }
}

TEST(Landscape, BoundsSandwichScan) {
  const auto scan = entland::scan_theta(example6(0.1), small_scan(64));
  for (std::size_t i = 0; i < scan.thetas.size(); ++i) {
    EXPECT_LE(scan.lower[i], scan.entropy[i] + 1e-9);
    EXPECT_GE(scan.upper[i], scan.entropy[i] - 1e-9);
  }
}

TEST(Landscape, BoundsAreNaNForNonGaussianNoise) {
  const SourceModel m({SourceSpec::uniform(), SourceSpec::gaussian()});
  const auto p = entland::evaluate_theta(m, 0.5);
  EXPECT_TRUE(std::isnan(p.upper));
  EXPECT_TRUE(std::isnan(p.lower));
}

TEST(Landscape, ScanIsDeterministic) {
  const auto a = entland::scan_theta(example6(0.1), small_scan(48));
  const auto b = entland::scan_theta(example6(0.1), small_scan(48));
  EXPECT_EQ(a.entropy, b.entropy);
  EXPECT_EQ(a.upper, b.upper);
}

TEST(Landscape, GridBelowSixteenRejected) {
  EXPECT_EQ(code_of([] { entland::scan_theta(example6(0.1), small_scan(8)); }),
            ErrorCode::invalid_argument);
}

TEST(Landscape, CandidatePinchesApproximator) {
  // At a collision direction, small noise makes H(wS) match ℋ.
  const SourceModel m = example6(0.02);
  const auto c = entland::candidate_directions_2d(m.atoms());
  const auto mix = std::find_if(c.begin(), c.end(), [](const auto& d) { return d.mixing; });
  ASSERT_NE(mix, c.end());
  const auto p = entland::evaluate_direction(m, mix->w_star);
  EXPECT_NEAR(p.entropy, p.upper, 1e-9);
  EXPECT_NEAR(p.upper, entland::kGaussianEntropy + std::log(0.02) + mix->entropy, 1e-12);
}

TEST(Taylor, NonSmoothKernelRejected) {
  const SourceModel m({SourceSpec::uniform(), SourceSpec::gaussian()});
  EXPECT_EQ(code_of([&] { entland::taylor_curvature_check(m, 0, 1e-3); }),
            ErrorCode::non_smooth_kernel);
}

TEST(Taylor, GaussianAxisIsFlat) {
  const SourceModel m({SourceSpec::gaussian(), SourceSpec::gaussian()});
  const auto t = entland::taylor_curvature_check(m, 0, 1e-2);
  EXPECT_NEAR(t.analytic, 0.0, 1e-6);
  EXPECT_NEAR(t.numeric, 0.0, 1e-4);
}

TEST(Sweep, FlatnessGrowsSmallWithSigma) {
  const std::vector<double> sigmas{0.1, 5.0};
  const auto sweep = entland::sigma_sweep(example6(0.1), sigmas, small_scan(32));
  ASSERT_EQ(sweep.size(), 2u);
  EXPECT_GT(sweep[0].flatness, sweep[1].flatness);
  EXPECT_LT(sweep[1].flatness, 0.05);
}

TEST(Symmetry, SignHoldsForExampleSix) {
  const auto r = entland::symmetry_checks(example6(0.1), small_scan(64));
  EXPECT_TRUE(r.sign.premise);
  EXPECT_TRUE(r.sign.passed) << r.sign.detail;
  EXPECT_FALSE(r.exchange.premise);
}

TEST(Symmetry, SymmetricSourceDetection) {
  const SourceModel m({SourceSpec::discrete({-1, 1}, {0.5, 0.5}, 0.1),
                       SourceSpec::discrete({-1, 1}, {0.3, 0.7}, 0.1)},
                      VarianceMode::as_given, false);
  EXPECT_TRUE(entland::source_is_symmetric(m, 0));
  EXPECT_FALSE(entland::source_is_symmetric(m, 1));
}

TEST(GreatCircle, OrthogonalDirectionAndGaussianFlatness) {
  const SourceModel m({SourceSpec::gaussian(), SourceSpec::gaussian(), SourceSpec::gaussian()});
  entland::SplitMix64 rng(11);
  const std::vector<double> w{0.0, 0.0, 1.0};
  const auto v = entland::random_orthogonal_direction(w, rng);
  EXPECT_NEAR(v[2], 0.0, 1e-15);
  EXPECT_NEAR(std::hypot(v[0], v[1], v[2]), 1.0, 1e-15);
  const auto g = entland::scan_great_circle(m, w, v, small_scan(16));
  ASSERT_EQ(g.t.size(), 16u);
  for (double h : g.entropy) EXPECT_NEAR(h, entland::kGaussianEntropy, 1e-9);
}

TEST(Parzen, ScanIsSeedDeterministic) {
  const SourceModel m({SourceSpec::uniform(), SourceSpec::uniform()});
  const auto a = entland::parzen_scan(m, 200, 5, small_scan(16));
  const auto b = entland::parzen_scan(m, 200, 5, small_scan(16));
  EXPECT_EQ(a.entropy, b.entropy);
  ASSERT_EQ(a.thetas.size(), 16u);
  const auto c = entland::parzen_scan(m, 200, 6, small_scan(16));
  EXPECT_NE(a.entropy, c.entropy);
}

}  // namespace
