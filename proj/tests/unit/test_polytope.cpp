#include "oracles.hpp"

#include "rauzy/errors.hpp"
#include "rauzy/polytope.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rauzy;

namespace {

std::vector<Rational> values(const WeightVector& w) { return {w.values().begin(), w.values().end()}; }

}  // namespace

TEST(CarriedPolytope, NonClassicalSegment) {
  const auto poly = carried_polytope(Exchange::parse("a a b | b c c"));
  ASSERT_EQ(poly.vertices().size(), 2u);
  EXPECT_EQ(poly.dimension(), 1u);
  std::vector<std::vector<Rational>> got{values(poly.vertices()[0]), values(poly.vertices()[1])};
  std::sort(got.begin(), got.end());
  const std::vector<std::vector<Rational>> want{{0, 1, 0}, {Rational(1, 2), 0, Rational(1, 2)}};
  EXPECT_EQ(got, want);
  EXPECT_FALSE(poly.is_full_simplex());
  // Segment from (0,1,0) to (1/2,0,1/2) has length sqrt(3/2).
  EXPECT_NEAR(poly.volume(), std::sqrt(1.5), 1e-12);
}

TEST(CarriedPolytope, ClassicalIsFullSimplex) {
  const auto poly = carried_polytope(Exchange::parse("a b | b a"));
  EXPECT_TRUE(poly.is_full_simplex());
  EXPECT_EQ(poly.dimension(), 1u);
  const auto poly3 = carried_polytope(Exchange::parse("a b c | c b a"));
  EXPECT_EQ(poly3.dimension(), 2u);
  // Standard 2-simplex in R^3 has area sqrt(3)/2.
  EXPECT_NEAR(poly3.volume(), std::sqrt(3.0) / 2, 1e-12);
}

TEST(CarriedPolytope, VerticesSatisfyInvariants) {
  for (const char* text : {"a a b | b c c", "a a b b | c c d d", "a b a c | d c d b", "a a | b c b c",
                           "a b c c | d d b e e a", "a b c d e f | f e d c b a"}) {
    const auto ex = Exchange::parse(text);
    const auto poly = carried_polytope(ex);
    for (const auto& v : poly.vertices()) {
      EXPECT_EQ(v.total(), 1) << text;
      EXPECT_EQ(oracle::row_defect(ex, v), 0) << text;
    }
    const bool classical = ex.is_classical();
    EXPECT_EQ(poly.dimension(), classical ? ex.size() - 1 : ex.size() - 2) << text;
  }
}

TEST(CarriedPolytope, SquareChart) {
  const auto poly = carried_polytope(Exchange::parse("a a b b | c c d d"));
  EXPECT_EQ(poly.vertices().size(), 4u);
  EXPECT_EQ(poly.dimension(), 2u);
  EXPECT_EQ(poly.triangulation().size(), 2u);
  // {a + b = 1/2, c + d = 1/2}: a product of two segments of length sqrt(2)/2.
  EXPECT_NEAR(poly.volume(), 0.5, 1e-12);
  for (double c : poly.centroid()) EXPECT_NEAR(c, 0.25, 1e-12);
}

TEST(EnumerateVertices, EmptyWhenOnlyZeroIsFeasible) {
  EXPECT_THROW(enumerate_vertices({{1, 1}}, 2), EmptyPolytopeError);
  EXPECT_THROW(enumerate_vertices({{1, 2, 3}}, 3), EmptyPolytopeError);
  EXPECT_THROW(enumerate_vertices({{1, 2}}, 3), DimensionMismatchError);
  EXPECT_EQ(enumerate_vertices({{0, 0}}, 2).size(), 2u);
}

TEST(Rank, Basics) {
  EXPECT_EQ(rank({{1, 2}, {2, 4}}), 1u);
  EXPECT_EQ(rank({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}), 2u);
  EXPECT_EQ(affine_dimension({{1, 0}, {0, 1}}), 1u);
  EXPECT_EQ(affine_dimension({{1, 0}}), 0u);
}

TEST(SampleCarried, OneSimplexInterior) {
  const auto poly = carried_polytope(Exchange::parse("a b | b a"));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto w = sample_carried(poly, seed);
    EXPECT_GT(w.values()[0], 0);
    EXPECT_LT(w.values()[0], 1);
    EXPECT_EQ(w.total(), 1);
  }
  EXPECT_EQ(sample_carried(poly, 4), sample_carried(poly, 4));
}

TEST(Sampler, TenThousandSamplesKeepInvariants) {
  const auto ex = Exchange::parse("a a b | b c c");
  const auto poly = carried_polytope(ex);
  const PolytopeSampler sampler(poly);
  RandomStream rng(9);
  for (int i = 0; i < 10000; ++i) {
    const auto w = sampler.sample_exact(rng, 64);
    ASSERT_EQ(w.total(), 1);
    ASSERT_EQ(oracle::row_defect(ex, w), 0);
    for (const auto& v : w.values()) ASSERT_GE(v, 0);
  }
}

TEST(Sampler, MeanMatchesCentroid) {
  const auto poly = carried_polytope(Exchange::parse("a a b b | c c d d"));
  const PolytopeSampler sampler(poly);
  RandomStream rng(21);
  const int n = 20000;
  std::vector<double> sum(4, 0), sum2(4, 0);
  for (int i = 0; i < n; ++i) {
    const auto w = sampler.sample_fast(rng);
    for (std::size_t j = 0; j < 4; ++j) {
      sum[j] += w.values()[j];
      sum2[j] += w.values()[j] * w.values()[j];
    }
  }
  for (std::size_t j = 0; j < 4; ++j) {
    const double mean = sum[j] / n;
    const double se = std::sqrt((sum2[j] / n - mean * mean) / n);
    EXPECT_LT(std::fabs(mean - 0.25), 3 * se) << j;
  }
}

// A coordinate of a uniform point of the standard (n-1)-simplex has the
// Beta(1, n-1) law.
TEST(Sampler, MarginalLawOnFullSimplex) {
  const auto poly = carried_polytope(Exchange::parse("a b c d | d c b a"));
  const PolytopeSampler sampler(poly);
  const auto cdf = [](double t) { return 1 - std::pow(1 - t, 3); };
  const std::size_t n = 5000;
  const double critical = 1.63 / std::sqrt(static_cast<double>(n));
  RandomStream rng(77);
  std::vector<double> fast, exact, strat;
  for (std::size_t i = 0; i < n; ++i) {
    fast.push_back(sampler.sample_fast(rng).values()[1]);
    exact.push_back(to_double(sampler.sample_exact(rng, 128).values()[2]));
  }
  for (const auto& w : sampler.stratified(n, rng)) strat.push_back(w.values()[0]);
  EXPECT_LT(oracle::ks_statistic(fast, cdf), critical);
  EXPECT_LT(oracle::ks_statistic(exact, cdf), critical);
  EXPECT_LT(oracle::ks_statistic(strat, cdf), critical);
}

TEST(Sampler, Errors) {
  const auto poly = carried_polytope(Exchange::parse("a b c | c b a"));
  const PolytopeSampler sampler(poly);
  RandomStream rng(1);
  EXPECT_THROW(sampler.sample_exact(rng, 0), DomainError);
  const std::vector<double> u{0.5};
  EXPECT_THROW(sampler.from_unit_cube(u), DimensionMismatchError);
}
