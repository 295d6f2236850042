#include "rauzy/rauzy.hpp"

#include "rauzy/errors.hpp"
#include "rauzy/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_set>

namespace rauzy {

namespace {

template <class Scalar>
void require_carried(const Exchange& ex, const BasicWeights<Scalar>& w) {
  const Scalar d = switch_defect(ex, w);
  if constexpr (std::is_floating_point_v<Scalar>) {
    const Scalar t = w.total();
    if (std::fabs(d) > 1e-9 * (t > 0 ? t : 1)) {
      throw DomainError("weights violate the switch condition (defect " + format_double(d) + ")");
    }
  } else {
    if (d != 0) throw DomainError("weights violate the switch condition");
  }
}

template <class Scalar>
std::string weight_text(const Scalar& v) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return format_double(v);
  } else {
    return v.str();
  }
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::max_steps:
      return "max-steps";
    case Termination::undefined_move:
      return "undefined-move";
    case Termination::tie:
      return "tie";
    case Termination::zero_weight:
      return "zero-weight";
  }
  return "?";
}

Termination parse_termination(std::string_view text) {
  for (auto t : {Termination::max_steps, Termination::undefined_move, Termination::tie, Termination::zero_weight}) {
    if (to_string(t) == text) return t;
  }
  throw ParseError("unknown termination state '" + std::string(text) + "'");
}

Exchange apply_move(const Exchange& ex, Row winner_row, MoveRecord* record) {
  const auto top = ex.top();
  const auto bottom = ex.bottom();
  const LabelId alpha = top.back();
  const LabelId beta = bottom.back();
  if (alpha == beta) {
    throw UndefinedMoveError("both rows end with '" + ex.alphabet().name(alpha) + "'");
  }
  const Row loser_row = opposite(winner_row);
  const LabelId winner = winner_row == Row::top ? alpha : beta;
  const LabelId loser = winner_row == Row::top ? beta : alpha;

  std::vector<LabelId> rows[2] = {{top.begin(), top.end()}, {bottom.begin(), bottom.end()}};
  auto& win = rows[static_cast<int>(winner_row)];
  auto& lose = rows[static_cast<int>(loser_row)];
  lose.pop_back();

  Row insertion_row;
  std::size_t position;
  const auto twin = std::find(win.begin(), win.end() - 1, winner);
  if (twin != win.end() - 1) {
    insertion_row = winner_row;
    position = static_cast<std::size_t>(twin - win.begin());
    win.insert(twin, loser);
  } else {
    const auto other = std::find(lose.begin(), lose.end(), winner);
    insertion_row = loser_row;
    position = static_cast<std::size_t>(other - lose.begin()) + 1;
    lose.insert(other + 1, loser);
  }
  if (rows[0].empty() || rows[1].empty()) {
    throw UndefinedMoveError("move would empty the " + std::string(to_string(loser_row)) + " row");
  }
  if (record) {
    *record = MoveRecord{.winner = winner,
                         .loser = loser,
                         .winner_row = winner_row,
                         .loser_row = loser_row,
                         .insertion_row = insertion_row,
                         .insertion_position = position};
  }
  return Exchange(ex.alphabet_ptr(), std::move(rows[0]), std::move(rows[1]));
}

template <class Scalar>
StepResult<Scalar> rauzy_step(const Exchange& ex, const BasicWeights<Scalar>& w) {
  require_same_alphabet(ex.alphabet(), w.alphabet());
  const LabelId alpha = ex.top().back();
  const LabelId beta = ex.bottom().back();
  const auto& names = ex.alphabet();
  if (alpha == beta) throw UndefinedMoveError("both rows end with '" + names.name(alpha) + "'");
  require_carried(ex, w);
  const Scalar& wa = w[alpha];
  const Scalar& wb = w[beta];
  if (wa == 0 || wb == 0) {
    throw ZeroWeightError("competing label '" + names.name(wa == 0 ? alpha : beta) + "' has weight 0");
  }
  if (wa == wb) {
    throw TieError("'" + names.name(alpha) + "' and '" + names.name(beta) + "' both weigh " + weight_text(wa));
  }
  MoveRecord move;
  Exchange next = apply_move(ex, wa > wb ? Row::top : Row::bottom, &move);
  std::vector<Scalar> values(w.values().begin(), w.values().end());
  values[index(move.winner)] -= values[index(move.loser)];
  return {std::move(next), BasicWeights<Scalar>(w.alphabet_ptr(), std::move(values)), move};
}

template StepResult<Rational> rauzy_step(const Exchange&, const WeightVector&);
template StepResult<BigInt> rauzy_step(const Exchange&, const ScaledWeights&);
template StepResult<double> rauzy_step(const Exchange&, const FastWeights&);

template <class Scalar>
BasicTrace<Scalar>::BasicTrace(Exchange initial, BasicWeights<Scalar> weights, int exponent) : exponent_(exponent) {
  require_same_alphabet(initial.alphabet(), weights.alphabet());
  exchanges_.push_back(std::move(initial));
  weights_.push_back(std::move(weights));
  scales_.push_back(1.0);
}

template <class Scalar>
void BasicTrace<Scalar>::push(StepResult<Scalar> step, double scale) {
  exchanges_.push_back(std::move(step.exchange));
  weights_.push_back(std::move(step.weights));
  moves_.push_back(step.move);
  scales_.push_back(scale);
}

template <class Scalar>
TransitionMatrix BasicTrace<Scalar>::stage_matrix(std::size_t i, std::size_t j) const {
  if (!(i < j && j <= length())) {
    throw RangeError("stage (" + std::to_string(i) + ", " + std::to_string(j) + ") outside a trace of length " +
                     std::to_string(length()));
  }
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->stages.find({i, j}); it != cache_->stages.end()) return it->second;
  }
  StageAccumulator acc(initial_exchange().size());
  for (std::size_t k = i; k < j; ++k) acc.push(moves_[k]);
  TransitionMatrix q = acc.matrix();
  std::lock_guard lock(cache_->mutex);
  cache_->stages.emplace(std::pair{i, j}, q);
  return q;
}

template class BasicTrace<Rational>;
template class BasicTrace<BigInt>;
template class BasicTrace<double>;

void rebalance(const Exchange& ex, std::vector<double>& weights) {
  const auto& coef = ex.switch_coefficients();
  double top = 0, bottom = 0;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (coef[i] > 0) top += coef[i] * weights[i];
    if (coef[i] < 0) bottom -= coef[i] * weights[i];
  }
  if (top > 0 && bottom > 0 && top != bottom) {
    const double mean = 0.5 * (top + bottom);
    const double up = mean / top;
    const double down = mean / bottom;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      if (coef[i] > 0) weights[i] *= up;
      if (coef[i] < 0) weights[i] *= down;
    }
  }
  double total = 0;
  for (double v : weights) total += v;
  if (total > 0) {
    for (double& v : weights) v /= total;
  }
}

template <class Scalar>
BasicTrace<Scalar> expand(const Exchange& ex, const BasicWeights<Scalar>& w, const ExpandOptions& options) {
  require_same_alphabet(ex.alphabet(), w.alphabet());
  require_carried(ex, w);
  const int exponent =
      options.exponent ? *options.exponent : static_cast<int>(carried_polytope(ex).dimension()) + 1;
  BasicTrace<Scalar> trace(ex, w, exponent);
  for (std::size_t k = 0; k < options.max_steps; ++k) {
    try {
      auto step = rauzy_step(trace.exchange(k), trace.weights(k));
      double scale = 1.0;
      if constexpr (std::is_floating_point_v<Scalar>) {
        std::vector<double> values(step.weights.values().begin(), step.weights.values().end());
        scale = 0;
        for (double v : values) scale += v;
        rebalance(step.exchange, values);
        step.weights = FastWeights(step.weights.alphabet_ptr(), std::move(values));
      }
      trace.push(std::move(step), scale);
    } catch (const UndefinedMoveError&) {
      trace.finish(Termination::undefined_move);
      return trace;
    } catch (const TieError&) {
      trace.finish(Termination::tie);
      return trace;
    } catch (const ZeroWeightError&) {
      trace.finish(Termination::zero_weight);
      return trace;
    }
  }
  trace.finish(Termination::max_steps);
  return trace;
}

template ExpansionTrace expand(const Exchange&, const WeightVector&, const ExpandOptions&);
template ScaledTrace expand(const Exchange&, const ScaledWeights&, const ExpandOptions&);
template FastTrace expand(const Exchange&, const FastWeights&, const ExpandOptions&);

StageAccumulator::StageAccumulator(std::size_t n) : n_(n) { reset(); }

void StageAccumulator::reset() {
  entries_.assign(n_ * n_, BigInt(0));
  column_sums_.assign(n_, BigInt(1));
  for (std::size_t i = 0; i < n_; ++i) entries_[i * n_ + i] = 1;
  zero_entries_ = n_ * n_ - n_;
  steps_ = 0;
}

void StageAccumulator::push(const MoveRecord& move) {
  const std::size_t w = index(move.winner);
  const std::size_t l = index(move.loser);
  for (std::size_t r = 0; r < n_; ++r) {
    const BigInt& add = entries_[r * n_ + w];
    if (add == 0) continue;
    BigInt& dst = entries_[r * n_ + l];
    if (dst == 0) --zero_entries_;
    dst += add;
  }
  column_sums_[l] += column_sums_[w];
  ++steps_;
}

TransitionMatrix StageAccumulator::matrix() const { return TransitionMatrix::from_entries(n_, entries_); }

bool qualifies(const StageAccumulator& stage, int exponent, const Rational& C) {
  return stage.steps() > 0 && stage.all_positive() && colsum_within(stage.column_sums(), exponent, C);
}

template <class Scalar>
StoppingDecomposition stopping_decomposition(const BasicTrace<Scalar>& trace, double C) {
  StoppingDecomposition out;
  out.C = C;
  out.trace_length = trace.length();
  if (!std::isfinite(C)) throw DomainError("distortion constant must be finite");
  const Rational bound = exact_rational(C);
  const auto& alphabet = trace.initial_exchange().alphabet_ptr();
  StageAccumulator acc(trace.initial_exchange().size());
  for (std::size_t k = 0; k < trace.length(); ++k) {
    acc.push(trace.moves()[k]);
    if (qualifies(acc, trace.exponent(), bound)) {
      auto q = acc.matrix();
      out.reports.push_back(colsum_report(q, trace.exponent(), alphabet));
      out.stage_matrices.push_back(std::move(q));
      out.stop_indices.push_back(k + 1);
      acc.reset();
    }
  }
  out.remainder_start = out.stop_indices.empty() ? 0 : out.stop_indices.back();
  return out;
}

template StoppingDecomposition stopping_decomposition(const ExpansionTrace&, double);
template StoppingDecomposition stopping_decomposition(const ScaledTrace&, double);
template StoppingDecomposition stopping_decomposition(const FastTrace&, double);

std::vector<Exchange> rauzy_class(const Exchange& root, std::size_t limit) {
  std::vector<Exchange> out{root};
  std::unordered_set<std::string> seen{root.to_string()};
  for (std::size_t head = 0; head < out.size(); ++head) {
    const Exchange current = out[head];
    if (current.top().back() == current.bottom().back()) continue;
    for (Row r : {Row::top, Row::bottom}) {
      std::optional<Exchange> moved;
      try {
        moved = apply_move(current, r);
      } catch (const UndefinedMoveError&) {
        continue;
      }
      Exchange next = std::move(*moved);
      if (seen.insert(next.to_string()).second) {
        if (out.size() >= limit) throw RangeError("Rauzy class exceeds " + std::to_string(limit) + " exchanges");
        out.push_back(std::move(next));
      }
    }
  }
  return out;
}

}  // namespace rauzy
