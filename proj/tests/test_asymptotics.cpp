#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <bspin/asymptotics.hpp>

using namespace bspin;

namespace {

std::vector<double> random_chamber_point(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 4.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  std::sort(x.rbegin(), x.rend());
  return x;
}

}  // namespace

TEST(GaussHermite, IntegratesEvenMomentsExactly) {
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int m : {1, 2, 5, 8, 13}) {
    const auto rule = quad::gauss_hermite(m);
    ASSERT_EQ(rule.size(), static_cast<std::size_t>(m));
    double moment = sqrt_pi;  // int t^{2k} e^{-t^2} = (2k-1)!! sqrt(pi) / 2^k
    for (int k = 0; 2 * k <= 2 * m - 1; ++k) {
      long double s = 0;
      for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
      EXPECT_NEAR(static_cast<double>(s), moment, 1e-13 * moment) << "m=" << m << " k=" << k;
      moment *= (2 * k + 1) / 2.0;
    }
    for (std::size_t i = 1; i < rule.size(); ++i) EXPECT_LT(rule.nodes[i - 1], rule.nodes[i]);
  }
  EXPECT_THROW(quad::gauss_hermite(0), std::invalid_argument);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int m : {1, 3, 16}) {
    const auto rule = quad::gauss_legendre(m);
    for (int k = 0; 2 * k <= 2 * m - 1; ++k) {
      long double s = 0;
      for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
      EXPECT_NEAR(static_cast<double>(s), 2.0 / (2 * k + 1), 1e-14);
    }
  }
}

TEST(LimitDensity, HandValues) {
  const std::vector<double> one{1.0};
  EXPECT_NEAR(phi(LimitDensity(Rank(1)), one), std::sqrt(2 / std::numbers::pi) * std::exp(-0.5), 1e-15);
  EXPECT_NEAR(phi(LimitDensity(Rank(1)), one), 0.483941, 1e-6);
  EXPECT_NEAR(radial_density(RadialDensity(Rank(1)), one), 2 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(radial_density(RadialDensity(Rank(1)), one), 0.636620, 1e-6);
  // walls
  EXPECT_EQ(phi(LimitDensity(Rank(2)), std::vector<double>{1.0, 1.0}), 0.0);
  EXPECT_EQ(phi(LimitDensity(Rank(2)), std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_THROW(phi(LimitDensity(Rank(2)), one), DomainError);
}

TEST(LimitDensity, LogMatchesValue) {
  std::mt19937 rng(3);
  for (int n = 1; n <= 4; ++n) {
    const LimitDensity d{Rank(n)};
    for (int t = 0; t < 50; ++t) {
      const auto x = random_chamber_point(rng, n);
      const double v = d(x);
      if (v > 1e-300) {
        EXPECT_NEAR(d.log(x), std::log(v), 1e-10);
      }
    }
  }
}

TEST(LimitDensity, WeylInvariant) {
  std::mt19937 rng(5);
  for (int n = 1; n <= 4; ++n) {
    const LimitDensity d{Rank(n)};
    const auto group = weyl_group(Rank(n));
    for (int t = 0; t < 20; ++t) {
      const auto x = random_chamber_point(rng, n);
      const double base = d(x);
      for (const auto& w : group) {
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = w.flips[i] * x[w.perm[i]];
        ASSERT_NEAR(d(y), base, 1e-12 * base + 1e-300);
      }
    }
  }
}

TEST(LimitDensity, RatioToRadialTimesGaussianIsConstant) {
  std::mt19937 rng(9);
  for (int n = 1; n <= 4; ++n) {
    const LimitDensity d{Rank(n)};
    const RadialDensity rad{Rank(n)};
    double first = 0;
    int used = 0;
    for (int t = 0; t < 150; ++t) {
      const auto x = random_chamber_point(rng, n);
      double r2 = 0;
      for (double v : x) r2 += v * v;
      const double denom = rad(x) * std::exp(-r2 / 2);
      if (!(denom > 1e-250)) continue;
      const double ratio = d(x) / denom;
      if (used++ == 0) first = ratio;
      EXPECT_NEAR(ratio, first, 1e-11 * first);
    }
    EXPECT_GE(used, 100);
    EXPECT_NEAR(first, static_cast<double>(d.norm_const() / rad.constant()), 1e-12 * first);
  }
}

TEST(ChamberNorm, IsOneUpToRankFour) {
  for (int n = 1; n <= 4; ++n) {
    const double z = chamber_norm(Rank(n));
    EXPECT_NEAR(z, 1.0, 1e-8) << "n=" << n;
    HermiteOptions doubled;
    doubled.nodes_per_axis = 2 * (2 * n + 3);
    EXPECT_LT(std::fabs(chamber_norm(Rank(n), doubled) - z), 1e-12) << "n=" << n;
  }
}

TEST(ChamberNorm, RejectsTooFewNodesAndLargeRank) {
  HermiteOptions few;
  few.nodes_per_axis = 4;
  EXPECT_THROW(chamber_norm(Rank(2), few), QuadratureError);
  EXPECT_THROW(chamber_norm(Rank(5)), DomainError);
}

TEST(Macdonald, RightHandSideValues) {
  EXPECT_EQ(macdonald_rhs(Rank(1), 1), 2);
  EXPECT_EQ(macdonald_rhs(Rank(2), 1), 48);
  EXPECT_EQ(macdonald_rhs(Rank(3), 1), 34560);
  EXPECT_EQ(macdonald_rhs(Rank(2), 0), 1);
  EXPECT_EQ(macdonald_rhs(Rank(1), 2), 12);  // 4! / 2!
}

TEST(Macdonald, QuadratureMatchesProduct) {
  for (int n = 1; n <= 3; ++n) {
    for (int gamma : {1, 2}) {
      const double rhs = static_cast<double>(macdonald_rhs(Rank(n), gamma));
      EXPECT_NEAR(macdonald_lhs_quadrature(Rank(n), gamma), rhs, 1e-10 * rhs)
          << "n=" << n << " gamma=" << gamma;
    }
  }
}
