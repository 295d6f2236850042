#pragma once

#include "rauzy/exchange.hpp"
#include "rauzy/matrix.hpp"
#include "rauzy/projective.hpp"
#include "rauzy/weights.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace rauzy {

// Recorded with every serialized trace; stopping indices depend on it.
inline constexpr std::string_view kInductionConvention =
    "right-end, weight-driven winner; loser reinserted after the winner's twin in the opposite row, "
    "before it when the twin shares the winner's row";

struct MoveRecord {
  LabelId winner{};
  LabelId loser{};
  Row winner_row = Row::top;
  Row loser_row = Row::bottom;
  Row insertion_row = Row::top;
  // Index of the reinserted loser in insertion_row after the move.
  std::size_t insertion_position = 0;

  // I + unit at (winner, loser), so that w_old = E * w_new.
  TransitionMatrix elementary_matrix(std::size_t n) const {
    return TransitionMatrix::elementary(n, index(winner), index(loser));
  }

  friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

// Combinatorial half of a move: the exchange after `winner_row` wins.
// Throws UndefinedMoveError if both rows end with the same label.
Exchange apply_move(const Exchange& ex, Row winner_row, MoveRecord* record = nullptr);

template <class Scalar>
struct StepResult {
  Exchange exchange;
  BasicWeights<Scalar> weights;
  MoveRecord move;
};

// One step of right-end Rauzy induction driven by the weights. Throws
// UndefinedMoveError, ZeroWeightError or TieError (in that order of
// precedence); DomainError if w is not carried by ex.
template <class Scalar>
StepResult<Scalar> rauzy_step(const Exchange& ex, const BasicWeights<Scalar>& w);

enum class Termination : std::uint8_t { max_steps, undefined_move, tie, zero_weight };

std::string_view to_string(Termination t);
Termination parse_termination(std::string_view text);

// Full record of an iterated induction. Exact traces (Rational, BigInt) keep
// the raw weights, so w_0 = stage_matrix(0, k) * w_k holds exactly. Fast
// traces renormalize after every step and record the factor, so
// w_{k-1} = scale(k) * E_k * w_k.
template <class Scalar>
class BasicTrace {
 public:
  BasicTrace(Exchange initial, BasicWeights<Scalar> weights, int exponent);

  const Exchange& initial_exchange() const { return exchanges_.front(); }
  const BasicWeights<Scalar>& initial_weights() const { return weights_.front(); }
  std::size_t length() const { return moves_.size(); }
  const std::vector<MoveRecord>& moves() const { return moves_; }
  // State after k steps; k = 0 is the initial state.
  const Exchange& exchange(std::size_t k) const { return exchanges_.at(k); }
  const BasicWeights<Scalar>& weights(std::size_t k) const { return weights_.at(k); }
  double scale(std::size_t k) const { return scales_.at(k); }
  Termination termination() const { return termination_; }
  // Polytope dimension + 1; the Jacobian exponent for every stage.
  int exponent() const { return exponent_; }

  // E_{i+1} ... E_j. Cached; throws RangeError unless 0 <= i < j <= length.
  TransitionMatrix stage_matrix(std::size_t i, std::size_t j) const;

  void push(StepResult<Scalar> step, double scale);
  void finish(Termination t) { termination_ = t; }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<std::size_t, std::size_t>, TransitionMatrix> stages;
  };

  std::vector<Exchange> exchanges_;
  std::vector<BasicWeights<Scalar>> weights_;
  std::vector<double> scales_;
  std::vector<MoveRecord> moves_;
  Termination termination_ = Termination::max_steps;
  int exponent_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

using ExpansionTrace = BasicTrace<Rational>;
using ScaledTrace = BasicTrace<BigInt>;
using FastTrace = BasicTrace<double>;

struct ExpandOptions {
  std::size_t max_steps = 0;
  // Jacobian exponent; computed from the carried polytope when absent.
  std::optional<int> exponent;
};

// Iterates rauzy_step until max_steps or a terminal error, which becomes the
// trace's termination state. Fast mode renormalizes and rebalances the
// switch condition after every step.
template <class Scalar>
BasicTrace<Scalar> expand(const Exchange& ex, const BasicWeights<Scalar>& w, const ExpandOptions& options);

template <class Scalar>
BasicTrace<Scalar> expand(const Exchange& ex, const BasicWeights<Scalar>& w, std::size_t max_steps) {
  return expand(ex, w, ExpandOptions{.max_steps = max_steps, .exponent = std::nullopt});
}

// Restores the switch condition of fast weights by rescaling the top-heavy
// and bottom-heavy labels toward their common mean, then renormalizes.
void rebalance(const Exchange& ex, std::vector<double>& weights);

// Running product of elementary matrices from a start index.
class StageAccumulator {
 public:
  explicit StageAccumulator(std::size_t n);

  // Right-multiplies by I + unit(winner, loser).
  void push(const MoveRecord& move);
  void reset();

  std::size_t size() const { return n_; }
  std::size_t steps() const { return steps_; }
  const std::vector<BigInt>& column_sums() const { return column_sums_; }
  bool all_positive() const { return zero_entries_ == 0; }
  TransitionMatrix matrix() const;

 private:
  std::size_t n_;
  std::vector<BigInt> entries_;
  std::vector<BigInt> column_sums_;
  std::size_t zero_entries_ = 0;
  std::size_t steps_ = 0;
};

// A stage qualifies when every entry is positive and its colsum distortion
// bound is at most C.
bool qualifies(const StageAccumulator& stage, int exponent, const Rational& C);

struct StoppingDecomposition {
  double C = 0.0;
  // Increasing stop indices; stage k spans (stop_{k-1}, stop_k] with
  // stop_{-1} = 0.
  std::vector<std::size_t> stop_indices;
  std::vector<TransitionMatrix> stage_matrices;
  std::vector<DistortionReport> reports;
  // Steps after the last stop never completed a qualifying stage.
  std::size_t remainder_start = 0;
  std::size_t trace_length = 0;
};

// Greedy: from each start take the smallest j whose stage qualifies.
template <class Scalar>
StoppingDecomposition stopping_decomposition(const BasicTrace<Scalar>& trace, double C);

// Every exchange reachable from `root` by either move; breadth-first order.
std::vector<Exchange> rauzy_class(const Exchange& root, std::size_t limit = 1'000'000);

}  // namespace rauzy
