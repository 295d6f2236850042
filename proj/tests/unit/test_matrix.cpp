#include "oracles.hpp"

#include "rauzy/errors.hpp"
#include "rauzy/matrix.hpp"
#include "rauzy/rng.hpp"

#include <gtest/gtest.h>

using namespace rauzy;

namespace {

TransitionMatrix m2(int a, int b, int c, int d) { return TransitionMatrix::from_rows({{a, b}, {c, d}}); }

}  // namespace

TEST(TransitionMatrix, IdentityLaw) {
  const auto q = m2(2, 1, 1, 1);
  EXPECT_EQ(compose(TransitionMatrix::identity(2), q), q);
  EXPECT_EQ(compose(q, TransitionMatrix::identity(2)), q);
  EXPECT_TRUE(TransitionMatrix::identity(4).is_identity());
}

TEST(TransitionMatrix, ElementaryProduct) {
  const auto e1 = TransitionMatrix::elementary(2, 0, 1);
  const auto e2 = TransitionMatrix::elementary(2, 1, 0);
  EXPECT_EQ(e1, m2(1, 1, 0, 1));
  EXPECT_EQ(e2, m2(1, 0, 1, 1));
  const auto q = compose(e1, e2);
  EXPECT_EQ(q, m2(2, 1, 1, 1));
  EXPECT_EQ(oracle::determinant(oracle::rows_of(q)), 1);
  EXPECT_TRUE(q.all_positive());
  EXPECT_EQ(q.column_sums(), (std::vector<BigInt>{3, 2}));
}

TEST(TransitionMatrix, RejectsInvalid) {
  EXPECT_THROW(m2(1, 1, 1, 1), UnimodularityError);
  EXPECT_THROW(m2(0, 1, 1, 0), UnimodularityError);
  EXPECT_THROW(m2(1, -1, 0, 1), DomainError);
  EXPECT_THROW(TransitionMatrix::from_rows({{1, 0}, {0}}), DimensionMismatchError);
  EXPECT_THROW(TransitionMatrix::elementary(3, 1, 1), RangeError);
  EXPECT_THROW(TransitionMatrix::elementary(3, 0, 3), RangeError);
  EXPECT_THROW(compose(TransitionMatrix::identity(2), TransitionMatrix::identity(3)), DimensionMismatchError);
}

TEST(Determinant, AgreesWithGaussianElimination) {
  RandomStream rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<BigInt> entries(n * n);
    for (auto& e : entries) e = static_cast<long>(rng() % 21) - 10;
    oracle::IntMatrix rows(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n * n; ++i) rows[i / n][i % n] = entries[i];
    EXPECT_EQ(Rational(determinant(entries, n)), oracle::determinant(rows));
  }
}

TEST(Compose, ThousandElementaryMatrices) {
  RandomStream rng(3);
  const std::size_t n = 5;
  auto q = TransitionMatrix::identity(n);
  auto ref = oracle::identity(n);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t r = rng() % n;
    std::size_t c = rng() % (n - 1);
    if (c >= r) ++c;
    q = compose(q, TransitionMatrix::elementary(n, r, c));
    oracle::right_elementary(ref, r, c);
  }
  EXPECT_EQ(oracle::rows_of(q), ref);
  EXPECT_EQ(oracle::determinant(ref), 1);
  EXPECT_TRUE(oracle::nonnegative(ref));
}

TEST(Multiply, ExactAndFast) {
  const auto q = m2(2, 1, 1, 1);
  const std::vector<Rational> v{Rational(1, 2), Rational(1, 3)};
  EXPECT_EQ(multiply(q, std::span<const Rational>(v)), (std::vector<Rational>{Rational(4, 3), Rational(5, 6)}));
  const std::vector<double> f{0.5, 0.25};
  EXPECT_EQ(multiply(q, std::span<const double>(f)), (std::vector<double>{1.25, 0.75}));
  const std::vector<double> bad{1.0};
  EXPECT_THROW(multiply(q, std::span<const double>(bad)), DimensionMismatchError);
}

TEST(ScaledEntries, HugeEntries) {
  auto q = TransitionMatrix::identity(2);
  for (int k = 0; k < 200; ++k) q = compose(q, TransitionMatrix::elementary(2, k % 2, 1 - k % 2));
  std::vector<double> out;
  const int shift = scaled_entries(q, out);
  EXPECT_GT(shift, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(std::ldexp(out[i], shift) / to_double(q.entries()[i]), 1.0, 1e-12);
  }
}

TEST(MatrixJson, RoundTripAndParse) {
  const auto q = m2(2, 1, 1, 1);
  EXPECT_EQ(matrix_from_json(to_json(q)), q);
  EXPECT_EQ(parse_matrix("[[2,1],[1,1]]"), q);
  EXPECT_EQ(parse_matrix(R"([["2","1"],["1","1"]])"), q);
  EXPECT_THROW(parse_matrix("[[2,1],[1"), ParseError);
  EXPECT_THROW(parse_matrix("[[2.5,1],[1,1]]"), ParseError);
  EXPECT_THROW(parse_matrix("[]"), ParseError);
}
