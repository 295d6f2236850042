#include "oracles.hpp"

#include "rauzy/errors.hpp"
#include "rauzy/exchange.hpp"
#include "rauzy/weights.hpp"

#include <gtest/gtest.h>

using namespace rauzy;

namespace {

WeightVector weights(const Exchange& ex, std::vector<Rational> v) { return {ex.alphabet_ptr(), std::move(v)}; }

}  // namespace

TEST(Exchange, NonClassicalShape) {
  const auto ex = Exchange::from_labels({"a", "a", "b"}, {"b", "c", "c"});
  EXPECT_FALSE(ex.is_classical());
  EXPECT_EQ(ex.size(), 3u);
  EXPECT_EQ(ex.alphabet().names(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(ex.switch_coefficients(), (std::vector<int>{2, 0, -2}));
}

TEST(Exchange, ClassicalShape) {
  const auto ex = Exchange::from_labels({"a", "b"}, {"b", "a"});
  EXPECT_TRUE(ex.is_classical());
  EXPECT_EQ(ex.switch_coefficients(), (std::vector<int>{0, 0}));
}

TEST(Exchange, LabelCountViolation) {
  EXPECT_THROW(Exchange::from_labels({"a", "a"}, {"b"}), LabelCountError);
  EXPECT_THROW(Exchange::parse("a a a | b b"), LabelCountError);
}

TEST(Exchange, EmptyRow) {
  EXPECT_THROW(Exchange::from_labels({}, {"a", "a"}), EmptyRowError);
  EXPECT_THROW(Exchange::parse("a a |"), EmptyRowError);
}

TEST(Exchange, ParseForms) {
  const auto plain = Exchange::parse("a a b | b c c");
  const auto labelled = Exchange::parse("top: a a b | bottom: b c c");
  EXPECT_EQ(plain, labelled);
  EXPECT_EQ(plain.to_string(), "top: a a b | bottom: b c c");
  EXPECT_EQ(Exchange::parse(plain.to_string()), plain);
  EXPECT_THROW(Exchange::parse("a a b b c c"), ParseError);
  EXPECT_THROW(Exchange::parse("a | b | c"), ParseError);
  EXPECT_THROW(Exchange::parse("a- a | b b"), ParseError);
}

TEST(Exchange, CanonicalAlphabetIsFirstOccurrence) {
  const auto ex = Exchange::parse("z y | x x y z");
  EXPECT_EQ(ex.alphabet().names(), (std::vector<std::string>{"z", "y", "x"}));
  EXPECT_THROW(ex.alphabet().id("q"), AlphabetMismatchError);
}

TEST(SwitchDefect, Examples) {
  const auto ex = Exchange::parse("a a b | b c c");
  EXPECT_EQ(switch_defect(ex, weights(ex, {1, 2, 1})), 0);
  EXPECT_EQ(switch_defect(ex, weights(ex, {1, 0, 0})), 2);
  const auto classical = Exchange::parse("a b | b a");
  EXPECT_EQ(switch_defect(classical, weights(classical, {Rational(7, 3), 11})), 0);
}

TEST(SwitchDefect, MatchesRowSums) {
  const auto ex = Exchange::parse("a b a c | d c d b");
  const auto w = weights(ex, {Rational(1, 3), 5, Rational(2, 7), 4});
  EXPECT_EQ(switch_defect(ex, w), oracle::row_defect(ex, w));
}

TEST(Weights, ValidationAndAlphabet) {
  const auto ex = Exchange::parse("a b | b a");
  EXPECT_THROW(weights(ex, {1}), AlphabetMismatchError);
  EXPECT_THROW(weights(ex, {1, -1}), DomainError);
  const auto other = Exchange::parse("a c | c a");
  EXPECT_THROW(switch_defect(other, weights(ex, {1, 1})), AlphabetMismatchError);
}

TEST(Weights, ParseText) {
  const auto ex = Exchange::parse("a a b | b c c");
  const auto w = parse_weights(ex.alphabet_ptr(), "a=0.25, b=1/2 ,c=0.25");
  EXPECT_EQ(w.at("b"), Rational(1, 2));
  EXPECT_EQ(w.total(), 1);
  EXPECT_THROW(parse_weights(ex.alphabet_ptr(), "a=1,b=1"), ParseError);
  EXPECT_THROW(parse_weights(ex.alphabet_ptr(), "a=1,b=1,c=1,a=2"), ParseError);
  EXPECT_THROW(parse_weights(ex.alphabet_ptr(), "a=1,b=1,d=1"), ParseError);
  EXPECT_THROW(parse_weights(ex.alphabet_ptr(), "a=1,b,c=1"), ParseError);
  EXPECT_THROW(parse_weights(ex.alphabet_ptr(), "a=1,b=-1,c=1"), ParseError);
}

TEST(Weights, Conversions) {
  const auto ex = Exchange::parse("a b c | c b a");
  const auto w = weights(ex, {Rational(1, 6), Rational(1, 3), Rational(1, 2)});
  const auto s = to_scaled(w);
  EXPECT_EQ(s.values()[0], 1);
  EXPECT_EQ(s.values()[1], 2);
  EXPECT_EQ(s.values()[2], 3);
  EXPECT_EQ(normalized(to_exact(s)), w);
  EXPECT_EQ(normalized(weights(ex, {2, 4, 6})), w);
  EXPECT_DOUBLE_EQ(to_fast(w).values()[2], 0.5);
  EXPECT_THROW(normalized(weights(ex, {0, 0, 0})), DomainError);
}

TEST(Weights, JsonRoundTrip) {
  const auto ex = Exchange::parse("a b | b a");
  const auto w = weights(ex, {Rational(2, 3), Rational(1, 3)});
  const auto j = to_json(w);
  EXPECT_EQ(j.at("a"), "2/3");
  EXPECT_EQ(weights_from_json(ex.alphabet_ptr(), j), w);
  const FastWeights f(ex.alphabet_ptr(), {0.1, 0.9});
  EXPECT_EQ(fast_weights_from_json(ex.alphabet_ptr(), to_json(f)), f);
  EXPECT_THROW(weights_from_json(ex.alphabet_ptr(), nlohmann::json::array()), ParseError);
}

TEST(Row, ParseAndOpposite) {
  EXPECT_EQ(parse_row("top"), Row::top);
  EXPECT_EQ(opposite(Row::top), Row::bottom);
  EXPECT_EQ(to_string(Row::bottom), "bottom");
  EXPECT_THROW(parse_row("middle"), ParseError);
}
