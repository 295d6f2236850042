#include "oracles.hpp"

#include "rauzy/errors.hpp"
#include "rauzy/rauzy.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rauzy;

namespace {

WeightVector weights(const Exchange& ex, std::vector<Rational> v) { return {ex.alphabet_ptr(), std::move(v)}; }

ExpansionTrace golden_trace(std::size_t steps) {
  const auto ex = Exchange::parse("a b | b a");
  return expand(ex, weights(ex, {Rational(oracle::fibonacci(201)), Rational(oracle::fibonacci(200))}), steps);
}

// Lengths of maximal runs of equal winners.
std::vector<BigInt> run_lengths(const std::vector<MoveRecord>& moves) {
  std::vector<BigInt> runs;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (i == 0 || moves[i].winner != moves[i - 1].winner) runs.push_back(0);
    runs.back() += 1;
  }
  return runs;
}

}  // namespace

TEST(RauzyStep, NonClassicalExample) {
  const auto ex = Exchange::parse("a a b | b c c");
  const auto w = weights(ex, {1, 3, 1});
  const auto step = rauzy_step(ex, w);
  EXPECT_EQ(ex.alphabet().name(step.move.winner), "b");
  EXPECT_EQ(ex.alphabet().name(step.move.loser), "c");
  EXPECT_EQ(step.move.winner_row, Row::top);
  EXPECT_EQ(step.weights, weights(ex, {1, 2, 1}));
  EXPECT_EQ(step.exchange, ex);
  const auto e = step.move.elementary_matrix(3);
  EXPECT_EQ(e, TransitionMatrix::elementary(3, 1, 2));
  EXPECT_EQ(multiply(e, step.weights.values()), std::vector<Rational>(w.values().begin(), w.values().end()));
  EXPECT_EQ(switch_defect(step.exchange, step.weights), 0);
}

TEST(RauzyStep, ClassicalStepThenTie) {
  const auto ex = Exchange::parse("a b | b a");
  const auto w = weights(ex, {Rational(2, 3), Rational(1, 3)});
  const auto step = rauzy_step(ex, w);
  EXPECT_EQ(ex.alphabet().name(step.move.winner), "a");
  EXPECT_EQ(step.move.winner_row, Row::bottom);
  EXPECT_EQ(step.weights, weights(ex, {Rational(1, 3), Rational(1, 3)}));
  EXPECT_EQ(step.move.elementary_matrix(2), TransitionMatrix::elementary(2, 0, 1));
  EXPECT_EQ(multiply(step.move.elementary_matrix(2), step.weights.values()),
            std::vector<Rational>(w.values().begin(), w.values().end()));
  EXPECT_THROW(rauzy_step(step.exchange, step.weights), TieError);
}

TEST(RauzyStep, ErrorPrecedence) {
  const auto same_end = Exchange::parse("b a | c c b a");
  EXPECT_THROW(rauzy_step(same_end, weights(same_end, {1, 1, 0})), UndefinedMoveError);
  EXPECT_THROW(rauzy_step(same_end, weights(same_end, {1, 1, 1})), UndefinedMoveError);
  const auto ex = Exchange::parse("a a b | b c c");
  EXPECT_THROW(rauzy_step(ex, weights(ex, {1, 1, 2})), DomainError);
  EXPECT_THROW(rauzy_step(ex, weights(ex, {Rational(1, 2), 0, Rational(1, 2)})), ZeroWeightError);
  EXPECT_THROW(rauzy_step(ex, weights(ex, {1, 1, 1})), TieError);
  const auto classical = Exchange::parse("a b | b a");
  EXPECT_THROW(rauzy_step(classical, weights(classical, {0, 0})), ZeroWeightError);
}

TEST(ApplyMove, TwinInWinnersRow) {
  const auto ex = Exchange::parse("a a b | b c c");
  MoveRecord rec;
  const auto next = apply_move(ex, Row::bottom, &rec);
  EXPECT_EQ(next.to_string(), "top: a a | bottom: b b c c");
  EXPECT_EQ(rec.insertion_row, Row::bottom);
  EXPECT_EQ(rec.insertion_position, 1u);
  EXPECT_EQ(ex.alphabet().name(rec.winner), "c");
}

TEST(ApplyMove, ClassicalMatchesStandardInduction) {
  const auto ex = Exchange::parse("a b c | c b a");
  EXPECT_EQ(apply_move(ex, Row::top).to_string(), "top: a b c | bottom: c a b");
  EXPECT_EQ(apply_move(ex, Row::bottom).to_string(), "top: a c b | bottom: c b a");
}

TEST(ApplyMove, EmptyingARowIsUndefined) {
  const auto ex = Exchange::parse("a | a b b");
  EXPECT_THROW(apply_move(ex, Row::bottom), UndefinedMoveError);
}

TEST(RauzyClass, KnownSizes) {
  EXPECT_EQ(rauzy_class(Exchange::parse("a b | b a")).size(), 1u);
  EXPECT_EQ(rauzy_class(Exchange::parse("a b c | c b a")).size(), 3u);
  EXPECT_EQ(rauzy_class(Exchange::parse("a b c d | d c b a")).size(), 7u);
  EXPECT_THROW(rauzy_class(Exchange::parse("a b c d | d c b a"), 3), RangeError);
}

TEST(Expand, GoldenRatioAlternates) {
  const auto trace = golden_trace(50);
  ASSERT_EQ(trace.length(), 50u);
  EXPECT_EQ(trace.termination(), Termination::max_steps);
  const auto digits = oracle::continued_fraction(oracle::fibonacci(201), oracle::fibonacci(200), 50);
  const auto runs = run_lengths(trace.moves());
  ASSERT_EQ(runs.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(digits[i], 1);
    EXPECT_EQ(runs[i], 1);
  }
}

TEST(Expand, RationalRatiosTerminate) {
  const auto ex = Exchange::parse("a b | b a");
  for (auto [p, q] : std::vector<std::pair<int, int>>{{355, 113}, {13, 8}, {7, 30}, {1000, 999}, {17, 17}}) {
    const auto trace = expand(ex, weights(ex, {p, q}), 100000);
    EXPECT_EQ(trace.termination(), Termination::tie) << p << "/" << q;
    auto digits = oracle::continued_fraction(p, q, 1000);
    if (digits.front() == 0) digits.erase(digits.begin());
    digits.back() -= 1;
    if (digits.back() == 0) digits.pop_back();
    EXPECT_EQ(run_lengths(trace.moves()), digits) << p << "/" << q;
  }
}

TEST(Expand, ZeroWeightTermination) {
  const auto ex = Exchange::parse("a a b | b c c");
  const auto trace = expand(ex, weights(ex, {Rational(1, 2), 0, Rational(1, 2)}), 10);
  EXPECT_EQ(trace.length(), 0u);
  EXPECT_EQ(trace.termination(), Termination::zero_weight);
}

TEST(Expand, ZeroSteps) {
  const auto trace = golden_trace(0);
  EXPECT_EQ(trace.length(), 0u);
  EXPECT_EQ(trace.termination(), Termination::max_steps);
  EXPECT_EQ(stopping_decomposition(trace, 4.0).stop_indices.size(), 0u);
}

TEST(Expand, RejectsUncarriedWeights) {
  const auto ex = Exchange::parse("a a b | b c c");
  EXPECT_THROW(expand(ex, weights(ex, {1, 1, 2}), 5), DomainError);
}

TEST(Expand, MatrixRelationAndSwitchCondition) {
  for (const char* text : {"a a b | b c c", "a b a c | d c d b", "a b c d | d c b a"}) {
    const auto ex = Exchange::parse(text);
    const PolytopeSampler sampler(carried_polytope(ex));
    RandomStream rng(13);
    const auto w = sampler.sample_exact(rng, 600);
    const auto trace = expand(ex, w, 80);
    auto product = oracle::identity(ex.size());
    for (std::size_t k = 1; k <= trace.length(); ++k) {
      const auto& mv = trace.moves()[k - 1];
      oracle::right_elementary(product, index(mv.winner), index(mv.loser));
      EXPECT_EQ(oracle::rows_of(trace.stage_matrix(0, k)), product);
      EXPECT_EQ(oracle::apply(product, trace.weights(k).values()),
                std::vector<Rational>(w.values().begin(), w.values().end()));
      EXPECT_EQ(oracle::row_defect(trace.exchange(k), trace.weights(k)), 0);
    }
  }
}

TEST(Expand, ScaledAgreesWithRational) {
  const auto ex = Exchange::parse("a a | b b c c");
  const PolytopeSampler sampler(carried_polytope(ex));
  RandomStream rng(2);
  const auto scaled = sampler.sample_scaled(rng, 300);
  const auto a = expand(ex, scaled, 60);
  const auto b = expand(ex, to_exact(scaled), 60);
  ASSERT_EQ(a.length(), b.length());
  EXPECT_EQ(a.moves(), b.moves());
  EXPECT_EQ(normalized(a.weights(a.length())), normalized(b.weights(b.length())));
}

TEST(Expand, FastTraceRelation) {
  const auto ex = Exchange::parse("a a b | b c c");
  const PolytopeSampler sampler(carried_polytope(ex));
  RandomStream rng(4);
  const auto trace = expand(ex, sampler.sample_fast(rng), 2000);
  EXPECT_EQ(trace.length(), 2000u);
  for (std::size_t k = 1; k <= trace.length(); ++k) {
    EXPECT_LE(std::fabs(oracle::row_defect(trace.exchange(k), trace.weights(k))), 1e-12);
    const auto back = multiply(trace.moves()[k - 1].elementary_matrix(3), trace.weights(k).values());
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(trace.scale(k) * back[j], trace.weights(k - 1).values()[j], 1e-12);
    }
  }
}

TEST(StageMatrix, UnitStagesAndAssociativity) {
  const auto trace = golden_trace(12);
  for (std::size_t j = 1; j <= 12; ++j) {
    EXPECT_EQ(trace.stage_matrix(j - 1, j), trace.moves()[j - 1].elementary_matrix(2));
  }
  for (std::size_t m = 1; m < 12; ++m) {
    EXPECT_EQ(trace.stage_matrix(0, 12), compose(trace.stage_matrix(0, m), trace.stage_matrix(m, 12)));
  }
  EXPECT_EQ(trace.stage_matrix(0, 2), TransitionMatrix::from_rows({{2, 1}, {1, 1}}));
  EXPECT_THROW(trace.stage_matrix(3, 3), RangeError);
  EXPECT_THROW(trace.stage_matrix(0, 13), RangeError);
}

TEST(StageAccumulator, MatchesStageMatrix) {
  const auto trace = golden_trace(9);
  StageAccumulator acc(2);
  for (std::size_t k = 3; k < 9; ++k) acc.push(trace.moves()[k]);
  EXPECT_EQ(acc.matrix(), trace.stage_matrix(3, 9));
  EXPECT_EQ(acc.column_sums(), trace.stage_matrix(3, 9).column_sums());
  EXPECT_TRUE(acc.all_positive());
  acc.reset();
  EXPECT_TRUE(acc.matrix().is_identity());
  EXPECT_FALSE(qualifies(acc, 2, Rational(100)));
}

TEST(StoppingDecomposition, GoldenFirstStop) {
  const auto trace = golden_trace(20);
  const auto dec = stopping_decomposition(trace, 4.0);
  ASSERT_FALSE(dec.stop_indices.empty());
  EXPECT_EQ(dec.stop_indices.front(), 2u);
  EXPECT_EQ(dec.stage_matrices.front(), TransitionMatrix::from_rows({{2, 1}, {1, 1}}));
  EXPECT_DOUBLE_EQ(dec.reports.front().colsum_bound, 2.25);
  EXPECT_EQ(dec.trace_length, 20u);
}

TEST(StoppingDecomposition, UnitBoundIsEmpty) {
  const auto dec = stopping_decomposition(golden_trace(30), 1.0);
  EXPECT_TRUE(dec.stop_indices.empty());
  EXPECT_EQ(dec.remainder_start, 0u);
  EXPECT_THROW(stopping_decomposition(golden_trace(3), INFINITY), DomainError);
}

TEST(StoppingDecomposition, StagesPartitionAndReproduceProduct) {
  for (const char* text : {"a a b | b c c", "a b c | c b a", "a a | b b c c"}) {
    const auto ex = Exchange::parse(text);
    const PolytopeSampler sampler(carried_polytope(ex));
    RandomStream rng(8);
    const auto trace = expand(ex, sampler.sample_scaled(rng, 1200), 250);
    for (double C : {4.0, 20.0, 100.0}) {
      const auto dec = stopping_decomposition(trace, C);
      ASSERT_EQ(dec.stop_indices.size(), dec.stage_matrices.size());
      if (dec.stop_indices.empty()) continue;
      std::size_t start = 0;
      auto product = TransitionMatrix::identity(ex.size());
      for (std::size_t s = 0; s < dec.stop_indices.size(); ++s) {
        const std::size_t stop = dec.stop_indices[s];
        ASSERT_GT(stop, start);
        EXPECT_EQ(dec.stage_matrices[s], trace.stage_matrix(start, stop));
        EXPECT_TRUE(dec.stage_matrices[s].all_positive());
        EXPECT_LE(dec.reports[s].colsum_bound, C);
        // Greedy: no shorter stage from the same start qualifies.
        for (std::size_t j = start + 1; j < stop; ++j) {
          const auto q = trace.stage_matrix(start, j);
          const bool ok = q.all_positive() && colsum_report(q, trace.exponent(), ex.alphabet_ptr()).colsum_bound <= C;
          EXPECT_FALSE(ok) << text << " C=" << C << " stage " << start << ".." << j;
        }
        product = compose(product, dec.stage_matrices[s]);
        start = stop;
      }
      EXPECT_EQ(dec.remainder_start, start);
      EXPECT_EQ(product, trace.stage_matrix(0, start));
    }
  }
}

TEST(Termination, Strings) {
  for (auto t : {Termination::max_steps, Termination::undefined_move, Termination::tie, Termination::zero_weight}) {
    EXPECT_EQ(parse_termination(to_string(t)), t);
  }
  EXPECT_EQ(to_string(Termination::max_steps), "max-steps");
  EXPECT_THROW(parse_termination("done"), ParseError);
}
