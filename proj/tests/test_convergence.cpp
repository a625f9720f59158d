#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include <bspin/convergence.hpp>

using namespace bspin;

TEST(Orthotope, Validation) {
  EXPECT_NO_THROW(Orthotope({0.5}, {0.5}));
  EXPECT_THROW(Orthotope({1.0}, {0.5}), DomainError);
  EXPECT_THROW(Orthotope({0.0, 0.0}, {1.0}), DomainError);
  EXPECT_THROW(Orthotope({}, {}), DomainError);
  const Orthotope box({0.0, 0.0}, {1.0, 1.0});
  EXPECT_TRUE(box.contains(std::vector<double>{0.0, 0.5}));
  EXPECT_FALSE(box.contains(std::vector<double>{1.0, 0.5}));
}

TEST(LocalError, FrozenValues) {
  // reference values from an independent arbitrary-precision evaluation
  EXPECT_NEAR(local_error(Rank(2), 100, 2.0).max_rel_err, 0.11428953865193, 1e-9);
  EXPECT_NEAR(local_error(Rank(1), 100, 2.0).max_rel_err, 0.01715, 5e-5);
  EXPECT_NEAR(local_error(Rank(2), 1600, 2.0).max_rel_err, 0.00777, 5e-5);
}

TEST(LocalError, DecreasesWithPower) {
  for (int n : {1, 2}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int power : {100, 400, 1600, 10000}) {
      const auto e = local_error(Rank(n), power, 2.0);
      EXPECT_GT(e.points, 0u);
      EXPECT_LT(e.max_rel_err, prev) << "n=" << n << " N=" << power;
      prev = e.max_rel_err;
    }
  }
  const double ratio = local_error(Rank(2), 100, 2.0).max_rel_err /
                       local_error(Rank(2), 10000, 2.0).max_rel_err;
  EXPECT_GE(ratio, 10.0);
}

TEST(LocalError, RegionMustBeNonEmpty) {
  EXPECT_THROW(local_error(Rank(2), 4, 0.5), DomainError);
  EXPECT_THROW(local_error(Rank(2), 4, -1.0), DomainError);
}

TEST(LoglogSlope, ExactPowerLaw) {
  std::vector<LocalErrorRow> rows;
  for (int p : {10, 100, 1000}) rows.push_back({p, 2.0, 3.0 / std::sqrt(p), APoint()});
  EXPECT_NEAR(loglog_slope(rows), -0.5, 1e-12);
  rows.resize(1);
  EXPECT_THROW(loglog_slope(rows), DomainError);
}

TEST(OrthotopeProbDiscrete, HandValuesAndAdditivity) {
  // n = 1, N = 4: atoms at x = 5/2, 3/2, 1/2 with masses 5/16, 9/16, 2/16
  EXPECT_EQ(orthotope_prob_discrete(Rank(1), 4, Orthotope({0.0}, {1.0})), Rational(1, 8));
  EXPECT_EQ(orthotope_prob_discrete(Rank(1), 4, Orthotope({0.5}, {1.5})), Rational(1, 8));
  EXPECT_EQ(orthotope_prob_discrete(Rank(1), 4, Orthotope({0.0}, {10.0})), Rational(1));
  EXPECT_EQ(orthotope_prob_discrete(Rank(1), 4, Orthotope({1.0}, {1.0})), Rational(0));
  EXPECT_EQ(orthotope_prob_discrete(Rank(1), 4, Orthotope({0.0}, {0.9})), Rational(2, 16));
  EXPECT_EQ(orthotope_prob_discrete(Rank(2), 6, Orthotope({-3.0, -3.0}, {0.0, 0.0})), Rational(0));
  EXPECT_EQ(orthotope_prob_discrete(Rank(2), 6, Orthotope({0.0, 0.0}, {10.0, 10.0})), Rational(1));
  for (int n = 1; n <= 3; ++n) {
    const int power = 30;
    std::vector<double> lo(n, 0.3), mid(n, 0.3), hi(n, 2.7);
    mid[0] = 1.4;
    std::vector<double> hi_left = hi;
    hi_left[0] = 1.4;
    const Rational whole = orthotope_prob_discrete(Rank(n), power, Orthotope(lo, hi));
    const Rational left = orthotope_prob_discrete(Rank(n), power, Orthotope(lo, hi_left));
    const Rational right = orthotope_prob_discrete(Rank(n), power, Orthotope(mid, hi));
    EXPECT_EQ(whole, left + right);
  }
}

TEST(OrthotopeProbLimit, MatchesClosedFormForRankOne) {
  const double expected = std::erf(1 / std::numbers::sqrt2) - std::sqrt(2 / std::numbers::pi) * std::exp(-0.5);
  EXPECT_NEAR(orthotope_prob_limit(Rank(1), Orthotope({0.0}, {1.0}), 1e-12), expected, 1e-11);
  EXPECT_NEAR(expected, 0.198748, 1e-6);
}

TEST(OrthotopeProbLimit, WholeChamberAndAdditivity) {
  for (int n = 1; n <= 3; ++n) {
    EXPECT_NEAR(orthotope_prob_limit(Rank(n), Orthotope(std::vector<double>(n, 0.0), std::vector<double>(n, 50.0)), 1e-11),
                1.0, 1e-9)
        << "n=" << n;
    std::vector<double> lo(n, 0.2), hi(n, 2.5), cut_hi = hi, cut_lo = lo;
    cut_hi[n - 1] = 0.9;
    cut_lo[n - 1] = 0.9;
    const double whole = orthotope_prob_limit(Rank(n), Orthotope(lo, hi), 1e-12);
    const double parts = orthotope_prob_limit(Rank(n), Orthotope(lo, cut_hi), 1e-12) +
                         orthotope_prob_limit(Rank(n), Orthotope(cut_lo, hi), 1e-12);
    EXPECT_NEAR(whole, parts, 1e-10);
  }
}

TEST(OrthotopeProbLimit, DegenerateAndOutsideBoxesAreZero) {
  EXPECT_EQ(orthotope_prob_limit(Rank(2), Orthotope({1.0, 0.5}, {1.0, 0.9}), 1e-10), 0.0);
  EXPECT_EQ(orthotope_prob_limit(Rank(2), Orthotope({-2.0, -2.0}, {0.0, 0.0}), 1e-10), 0.0);
  // a box entirely above the diagonal misses the chamber
  EXPECT_EQ(orthotope_prob_limit(Rank(2), Orthotope({0.0, 2.0}, {1.0, 3.0}), 1e-10), 0.0);
}

TEST(OrthotopeProbLimit, StableUnderDoubledResolution) {
  LimitQuadratureOptions fine;
  fine.panel_nodes = 32;
  for (int n = 1; n <= 3; ++n) {
    std::vector<double> lo(n, 0.1), hi(n, 1.9);
    lo[0] = 0.7;
    const Orthotope box(lo, hi);
    EXPECT_NEAR(orthotope_prob_limit(Rank(n), box, 1e-10), orthotope_prob_limit(Rank(n), box, 1e-12, fine), 1e-10);
  }
}

TEST(OrthotopeProbLimit, BudgetExhaustionReportsEstimate) {
  LimitQuadratureOptions tiny;
  tiny.panel_nodes = 2;
  tiny.max_depth = 1;
  try {
    orthotope_prob_limit(Rank(2), Orthotope({0.0, 0.0}, {3.0, 3.0}), 1e-14, tiny);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_TRUE(std::isfinite(e.best_estimate()));
  }
}

TEST(GlobalGap, ShrinksWithPower) {
  const Orthotope box({0.5, 0.0}, {1.5, 1.0});
  double prev = std::numeric_limits<double>::infinity();
  for (int power : {100, 400, 1600}) {
    const double g = global_gap(Rank(2), power, box);
    EXPECT_LT(g, prev);
    prev = g;
  }
}

namespace {

std::map<std::vector<int>, long> histogram(const std::vector<APoint>& draws) {
  std::map<std::vector<int>, long> h;
  for (const auto& a : draws) ++h[a.vec()];
  return h;
}

}  // namespace

TEST(Sample, DeterministicForSeed) {
  const auto a = sample(Rank(2), 15, 500, 42);
  const auto b = sample(Rank(2), 15, 500, 42);
  const auto c = sample(Rank(2), 15, 500, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_TRUE(sample(Rank(2), 15, 0, 1).empty());
}

TEST(Sample, MatchesPmfChiSquareAndTotalVariation) {
  const Rank n(2);
  const int power = 15;
  const std::size_t count = 100000;
  const auto h = histogram(sample(n, power, count, 42));
  const auto table = decomposition_table(n, power);

  double chi2 = 0, tv = 0, pooled_obs = 0, pooled_exp = 0;
  int bins = 0;
  for (const auto& row : table.rows) {
    const double p = to_double(row.probability);
    auto it = h.find(row.a.vec());
    const double obs = it == h.end() ? 0.0 : static_cast<double>(it->second);
    const double expected = p * count;
    tv += std::fabs(obs / count - p);
    if (expected >= 5) {
      chi2 += (obs - expected) * (obs - expected) / expected;
      ++bins;
    } else {
      pooled_obs += obs;
      pooled_exp += expected;
    }
  }
  if (pooled_exp > 0) {
    chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++bins;
  }
  tv /= 2;
  const boost::math::chi_squared dist(bins - 1);
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.999));
  EXPECT_LE(tv, 0.02);
}

TEST(Sample, DegenerateDistribution) {
  for (const auto& a : sample(Rank(3), 0, 10, 7)) EXPECT_EQ(a.vec(), (std::vector<int>{5, 3, 1}));
  for (const auto& a : sample(Rank(2), 1, 10, 7)) EXPECT_EQ(a.vec(), (std::vector<int>{4, 2}));
}
