#pragma once

#include "rauzy/errors.hpp"
#include "rauzy/exchange.hpp"
#include "rauzy/matrix.hpp"
#include "rauzy/numeric.hpp"
#include "rauzy/polytope.hpp"
#include "rauzy/rauzy.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rauzy {

enum class SelectorKind : std::uint8_t { halfspace, vertex_cap, custom_threshold };

std::string_view to_string(SelectorKind kind);

// Synthetic subset {x : f(x) >= t} of a carried polytope with prescribed
// Lebesgue proportion K. f is linear:
//   halfspace         f = <v_0 - v_last, x>
//   vertex-cap        f = -(mass of x outside the support of vertex v_k)
//   custom-threshold  f = <coefficients, x>
// The threshold is chosen per polytope so the proportion reaches K, unless an
// explicit one is given (then K is only reported).
struct SelectorSpec {
  SelectorKind kind = SelectorKind::halfspace;
  double proportion = 0.5;
  std::size_t vertex = 0;
  std::map<std::string, double> coefficients;
  std::optional<double> threshold;
  // halfspace only: cut at the midpoint of v_0 and v_last.
  bool midpoint = false;

  nlohmann::json to_json() const;
};

// "halfspace:K", "half", "whole", "vertex-cap:K[:k]",
// "custom:K:a=1,b=-1[:t]". Throws ParseError.
SelectorSpec parse_selector(std::string_view text);

class ResolvedSelector {
 public:
  ResolvedSelector(std::vector<double> coefficients, double threshold, double proportion, double standard_error);

  bool contains(std::span<const double> x) const;
  bool contains(const FastWeights& x) const { return contains(x.values()); }
  double functional(std::span<const double> x) const;

  const std::vector<double>& coefficients() const { return coefficients_; }
  // -inf selects the whole polytope.
  double threshold() const { return threshold_; }
  // Monte Carlo estimate of the selected Lebesgue proportion.
  double proportion() const { return proportion_; }
  double standard_error() const { return standard_error_; }

  nlohmann::json to_json() const;

 private:
  std::vector<double> coefficients_;
  double threshold_;
  double proportion_;
  double standard_error_;
};

inline constexpr std::size_t kSelectorResolutionSamples = 1 << 14;

// Deterministic in (spec, polytope, seed). The threshold is the empirical
// quantile of f over stratified samples at K plus three binomial standard
// errors, so the selected proportion is at least K with high confidence.
ResolvedSelector resolve_selector(const SelectorSpec& spec, const CarriedPolytope& poly, std::uint64_t seed,
                                  std::size_t samples = kSelectorResolutionSamples);

struct RecurrenceConfig {
  double C = 4.0;
  std::size_t max_steps = 200;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  NumericMode mode = NumericMode::exact;
  // Precision of exact samples; defaults to 4 * max_steps + 256 bits.
  std::optional<unsigned> sample_bits;
  std::size_t k_max = 5;
  unsigned threads = 0;

  unsigned resolved_bits() const { return sample_bits ? *sample_bits : static_cast<unsigned>(4 * max_steps + 256); }
  nlohmann::json to_json() const;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t stages = 0;
  std::optional<std::size_t> first_stop;
  std::size_t steps = 0;
  Termination termination = Termination::max_steps;
};

struct RecurrenceStats {
  RecurrenceConfig config;
  std::string exchange;
  int exponent = 0;
  std::vector<TrialRecord> trials;
  // fraction_at_least[k-1] = fraction of trials with >= k stages among those
  // that ran to max_steps; early terminations count as failures.
  std::vector<double> fraction_at_least;
  std::map<Termination, std::size_t> termination_histogram;

  double fraction(std::size_t k) const { return fraction_at_least.at(k - 1); }
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

RecurrenceStats recurrence_experiment(const Exchange& ex, const RecurrenceConfig& config);

struct TransportReport {
  double distortion = 1.0;
  double c = 1.0;
  double source_ratio = 0.0;
  double source_se = 0.0;
  double target_ratio = 0.0;
  double target_se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  // Distance of target_ratio inside [lower, upper] (negative when outside).
  double margin = 0.0;
  bool holds = false;
  std::size_t samples = 0;
  int exponent = 0;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Checks c * l(A)/l(P) <= l(T_Q A)/l(T_Q P) <= (1/c) * l(A)/l(P) with
// c = 1/D, D the exact distortion of Q on the domain polytope `poly`.
// Target-side measures are importance-weighted by the Jacobian. Holds when
// the target ratio is within three standard errors of [lower, upper].
// Throws InsufficientSamplesError when the target standard error exceeds
// 10% of a nonempty gap.
TransportReport eq1_transport_check(const TransitionMatrix& q, const CarriedPolytope& poly,
                                    const ResolvedSelector& region, std::size_t samples, std::uint64_t seed);

struct DecayConfig {
  double C = 2.0;
  SelectorSpec selector;
  std::size_t depth = 10;
  // Maximum number of stages harvested over all levels.
  std::size_t budget = 1'000'000;
  std::size_t samples = 4096;
  std::uint64_t seed = 0;
  // Steps allowed while searching for one qualifying stage.
  std::size_t max_stage_steps = 2048;
  unsigned sample_bits = 4096;
  unsigned threads = 0;

  nlohmann::json to_json() const;
};

struct DecayLevel {
  std::size_t level = 0;
  std::size_t alive = 0;
  double residual = 1.0;
  double standard_error = 0.0;
  double bound = 1.0;
  // Stages harvested at this level and how many are distinct cylinders.
  std::size_t stages = 0;
  std::size_t cylinders = 0;
  // Survivors for which no qualifying stage was found.
  std::size_t uncovered = 0;
  // The cylinders' move prefixes are prefix-free.
  bool disjoint = true;
};

struct DecayExperiment {
  DecayConfig config;
  std::string exchange;
  double c = 0.5;
  int exponent = 0;
  std::vector<DecayLevel> levels;
  bool budget_exhausted = false;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

class BudgetExhaustedError : public Error {
 public:
  BudgetExhaustedError(const std::string& what, DecayExperiment partial)
      : Error(what), partial_(std::move(partial)) {}
  const DecayExperiment& partial() const { return partial_; }

 private:
  DecayExperiment partial_;
};

// (1 - K * c)^level with c = transport_constant(C).
double decay_bound(double K, double C, std::size_t level);

DecayExperiment decay_experiment(const Exchange& ex, const DecayConfig& config);

}  // namespace rauzy
