#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "entland/kernel.hpp"

namespace {

// Independent erfc: Maclaurin series of erf for small x, Lentz continued
// fraction for the tail. Only used to cross-check std::erfc.
double erfc_series(double x) {
  double term = x, sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  return 1.0 - 2.0 / std::sqrt(std::numbers::pi) * sum;
}

double erfc_fraction(double x) {
  // erfc(x) = exp(-x²)/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  const double tiny = 1e-300;
  double f = x, c = x, d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    d = std::abs(d) < tiny ? tiny : d;
    c = x + a / c;
    c = std::abs(c) < tiny ? tiny : c;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

double erfc_oracle(double x) { return x < 2.0 ? erfc_series(x) : erfc_fraction(x); }

struct Frozen {
  double x;
  double value;
};

// mpmath.erfc at 40 digits.
constexpr Frozen kFrozen[] = {
    {0.1, 0.8875370839817151015952877},
    {0.5, 0.4795001221869534623172533},
    {1.0, 0.1572992070502851306587794},
    {2.0, 0.004677734981047265837930744},
    {3.0, 2.209049699858544137277613e-5},
    {3.5355339059327376220, 5.733031437583878233475047e-7},
    {4.0, 1.541725790028001885215967e-8},
    {5.0, 1.537459794428034850188343e-12},
    {6.0, 2.151973671249891311659335e-17},
};

TEST(Erfc, MatchesFrozenHighPrecisionValues) {
  for (const auto& f : kFrozen) {
    EXPECT_LE(std::abs(std::erfc(f.x) - f.value), 1e-12 * f.value) << "x = " << f.x;
  }
}

TEST(Erfc, PinnedAtOneBySeriesOracle) {
  EXPECT_NEAR(erfc_series(1.0), 0.15729920705028513, 1e-15);
  EXPECT_LE(std::abs(std::erfc(1.0) - erfc_series(1.0)), 1e-12 * 0.1573);
}

TEST(Erfc, RelativeErrorOnZeroToSixAgainstOracle) {
  double worst = 0.0;
  for (int i = 0; i <= 600; ++i) {
    const double x = 0.01 * i;
    const double ref = erfc_oracle(x);
    worst = std::max(worst, std::abs(std::erfc(x) - ref) / ref);
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(ScalarKernel, ClosedFormEntropies) {
  EXPECT_DOUBLE_EQ(entland::ScalarKernel::gaussian().entropy(),
                   0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e));
  EXPECT_DOUBLE_EQ(entland::ScalarKernel::uniform().entropy(), std::log(2.0 * std::sqrt(3.0)));
}

TEST(ScalarKernel, SupAndSupport) {
  EXPECT_DOUBLE_EQ(entland::ScalarKernel::gaussian().sup(), 1.0 / std::sqrt(2.0 * std::numbers::pi));
  EXPECT_DOUBLE_EQ(entland::ScalarKernel::uniform().sup(), 1.0 / (2.0 * std::sqrt(3.0)));
  EXPECT_TRUE(std::isinf(entland::ScalarKernel::gaussian().half_support()));
  EXPECT_DOUBLE_EQ(entland::ScalarKernel::uniform().half_support(), std::sqrt(3.0));
}

TEST(ScalarKernel, IntegratesToOne) {
  for (auto k : {entland::ScalarKernel::gaussian(), entland::ScalarKernel::uniform()}) {
    const double r = std::isinf(k.half_support()) ? 12.0 : k.half_support();
    const int n = 200000;
    const double lo = -r, h = 2 * r / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += k.pdf(lo + (i + 0.5) * h) * h;
    EXPECT_NEAR(s, 1.0, 1e-9) << to_string(k.kind());
  }
}

TEST(ScalarKernel, CdfLimits) {
  for (auto k : {entland::ScalarKernel::gaussian(), entland::ScalarKernel::uniform()}) {
    EXPECT_DOUBLE_EQ(k.cdf(0.0), 0.5);
    EXPECT_LT(k.cdf(-20.0), 1e-88);
    EXPECT_DOUBLE_EQ(k.cdf(20.0), 1.0);
  }
}

TEST(ScalarKernel, UnitVariance) {
  for (auto k : {entland::ScalarKernel::gaussian(), entland::ScalarKernel::uniform()}) {
    const double r = std::isinf(k.half_support()) ? 12.0 : k.half_support();
    const int n = 200000;
    const double lo = -r, h = 2 * r / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = lo + (i + 0.5) * h;
      s += x * x * k.pdf(x) * h;
    }
    EXPECT_NEAR(s, 1.0, 1e-6) << to_string(k.kind());
  }
}

}  // namespace
