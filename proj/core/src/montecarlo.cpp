#include "rauzy/montecarlo.hpp"

#include "rauzy/parallel.hpp"
#include "rauzy/projective.hpp"
#include "rauzy/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace rauzy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t tag(std::string_view text) { return stable_hash(text.data(), text.size()); }

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

double parse_real(std::string_view text, const char* what) {
  try {
    return to_double(parse_rational(text));
  } catch (const ParseError&) {
    throw ParseError(std::string("malformed ") + what + " '" + std::string(text) + "'");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> fast_vertex(const WeightVector& v) {
  std::vector<double> out;
  for (const auto& x : v.values()) out.push_back(to_double(x));
  return out;
}

std::vector<double> selector_coefficients(const SelectorSpec& spec, const CarriedPolytope& poly) {
  const auto& vertices = poly.vertices();
  const std::size_t n = poly.exchange().size();
  switch (spec.kind) {
    case SelectorKind::halfspace: {
      const auto first = fast_vertex(vertices.front());
      const auto last = fast_vertex(vertices.back());
      std::vector<double> d(n);
      for (std::size_t j = 0; j < n; ++j) d[j] = first[j] - last[j];
      return d;
    }
    case SelectorKind::vertex_cap: {
      if (spec.vertex >= vertices.size()) {
        throw DomainError("vertex-cap index " + std::to_string(spec.vertex) + " but the polytope has " +
                          std::to_string(vertices.size()) + " vertices");
      }
      std::vector<double> d(n, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (vertices[spec.vertex].values()[j] == 0) d[j] = -1.0;
      }
      return d;
    }
    case SelectorKind::custom_threshold: {
      std::vector<double> d(n, 0.0);
      for (const auto& [label, value] : spec.coefficients) d[index(poly.exchange().alphabet().id(label))] = value;
      return d;
    }
  }
  return {};
}

double binomial_se(double p, std::size_t n) { return n == 0 ? 0.0 : std::sqrt(std::max(0.0, p * (1 - p)) / n); }

// Column sums scaled by a common power of two so the largest is near 1.
std::vector<double> scaled_column_sums(const TransitionMatrix& q) {
  const auto sums = q.column_sums();
  const BigInt& hi = *std::max_element(sums.begin(), sums.end());
  const unsigned bits = static_cast<unsigned>(msb(hi));
  const unsigned shift = bits > 60 ? bits - 60 : 0;
  std::vector<double> out;
  for (const auto& s : sums) out.push_back(to_double(BigInt(s >> shift)));
  return out;
}

}  // namespace

std::string_view to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::halfspace:
      return "halfspace";
    case SelectorKind::vertex_cap:
      return "vertex-cap";
    case SelectorKind::custom_threshold:
      return "custom-threshold";
  }
  return "?";
}

nlohmann::json SelectorSpec::to_json() const {
  nlohmann::json j = {{"kind", std::string(to_string(kind))}, {"proportion", proportion}};
  if (kind == SelectorKind::vertex_cap) j["vertex"] = vertex;
  if (kind == SelectorKind::custom_threshold) j["coefficients"] = coefficients;
  j["threshold"] = threshold ? nlohmann::json(*threshold) : nlohmann::json(nullptr);
  if (midpoint) j["midpoint"] = true;
  return j;
}

SelectorSpec parse_selector(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view kind = parts.front();
  SelectorSpec spec;
  const auto proportion = [&](std::size_t i) {
    if (i >= parts.size()) throw ParseError("selector '" + std::string(text) + "' needs a proportion");
    const double k = parse_real(parts[i], "proportion");
    if (!(k >= 0 && k <= 1)) throw ParseError("selector proportion must lie in [0, 1]");
    return k;
  };
  if (kind == "half") {
    if (parts.size() != 1) throw ParseError("'half' takes no parameters");
    spec.kind = SelectorKind::halfspace;
    spec.proportion = 0.5;
    spec.midpoint = true;
  } else if (kind == "whole") {
    if (parts.size() != 1) throw ParseError("'whole' takes no parameters");
    spec.kind = SelectorKind::halfspace;
    spec.proportion = 1.0;
  } else if (kind == "halfspace") {
    if (parts.size() != 2) throw ParseError("expected halfspace:K");
    spec.kind = SelectorKind::halfspace;
    spec.proportion = proportion(1);
  } else if (kind == "vertex-cap") {
    if (parts.size() < 2 || parts.size() > 3) throw ParseError("expected vertex-cap:K[:vertex]");
    spec.kind = SelectorKind::vertex_cap;
    spec.proportion = proportion(1);
    if (parts.size() == 3) {
      const double v = parse_real(parts[2], "vertex index");
      if (v < 0 || v != std::floor(v)) throw ParseError("vertex index must be a nonnegative integer");
      spec.vertex = static_cast<std::size_t>(v);
    }
  } else if (kind == "custom") {
    if (parts.size() < 3 || parts.size() > 4) throw ParseError("expected custom:K:label=coef,...[:threshold]");
    spec.kind = SelectorKind::custom_threshold;
    spec.proportion = proportion(1);
    for (auto item : split(parts[2], ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) throw ParseError("malformed coefficient '" + std::string(item) + "'");
      spec.coefficients[std::string(item.substr(0, eq))] = parse_real(item.substr(eq + 1), "coefficient");
    }
    if (parts.size() == 4) spec.threshold = parse_real(parts[3], "threshold");
  } else {
    throw ParseError("unknown selector '" + std::string(kind) + "'");
  }
  return spec;
}

ResolvedSelector::ResolvedSelector(std::vector<double> coefficients, double threshold, double proportion,
                                   double standard_error)
    : coefficients_(std::move(coefficients)),
      threshold_(threshold),
      proportion_(proportion),
      standard_error_(standard_error) {}

double ResolvedSelector::functional(std::span<const double> x) const { return dot(coefficients_, x); }

bool ResolvedSelector::contains(std::span<const double> x) const {
  if (threshold_ == -kInf) return true;
  return functional(x) >= threshold_;
}

nlohmann::json ResolvedSelector::to_json() const {
  return {{"coefficients", coefficients_},
          {"threshold", std::isfinite(threshold_) ? nlohmann::json(threshold_) : nlohmann::json(nullptr)},
          {"whole", threshold_ == -kInf},
          {"proportion", proportion_},
          {"standard_error", standard_error_}};
}

ResolvedSelector resolve_selector(const SelectorSpec& spec, const CarriedPolytope& poly, std::uint64_t seed,
                                  std::size_t samples) {
  if (samples == 0) throw DomainError("selector resolution needs samples");
  auto coef = selector_coefficients(spec, poly);
  RandomStream rng(seed, tag("selector|" + poly.exchange().to_string()));
  const auto points = PolytopeSampler(poly).stratified(samples, rng);
  std::vector<double> values;
  values.reserve(points.size());
  for (const auto& p : points) values.push_back(dot(coef, p.values()));

  double threshold;
  if (spec.threshold || spec.midpoint) {
    if (spec.threshold) {
      threshold = *spec.threshold;
    } else {
      threshold = 0.5 * (dot(coef, fast_vertex(poly.vertices().front())) +
                         dot(coef, fast_vertex(poly.vertices().back())));
    }
  } else if (spec.proportion >= 1.0) {
    threshold = -kInf;
  } else if (spec.proportion <= 0.0) {
    threshold = kInf;
  } else {
    const double K = spec.proportion;
    const double target = std::min(1.0, K + 3.0 * binomial_se(K, samples));
    const auto need = static_cast<std::size_t>(std::ceil(target * static_cast<double>(samples)));
    std::sort(values.begin(), values.end(), std::greater<>());
    threshold = need >= samples ? -kInf : values[need - 1];
  }

  ResolvedSelector selector(coef, threshold, 0.0, 0.0);
  std::size_t inside = 0;
  for (const auto& p : points) inside += selector.contains(p.values());
  const double prop = static_cast<double>(inside) / static_cast<double>(samples);
  return {std::move(coef), threshold, prop, binomial_se(prop, samples)};
}

nlohmann::json RecurrenceConfig::to_json() const {
  return {{"C", C},
          {"max_steps", max_steps},
          {"trials", trials},
          {"seed", seed},
          {"mode", std::string(to_string(mode))},
          {"sample_bits", mode == NumericMode::exact ? nlohmann::json(resolved_bits()) : nlohmann::json(nullptr)},
          {"k_max", k_max}};
}

RecurrenceStats recurrence_experiment(const Exchange& ex, const RecurrenceConfig& config) {
  if (config.trials == 0) throw DomainError("recurrence experiment needs at least one trial");
  if (config.k_max == 0) throw DomainError("k_max must be positive");
  if (!std::isfinite(config.C)) throw DomainError("C must be finite");
  const CarriedPolytope poly = carried_polytope(ex);
  const PolytopeSampler sampler(poly);
  RecurrenceStats stats;
  stats.config = config;
  stats.exchange = ex.to_string();
  stats.exponent = static_cast<int>(poly.dimension()) + 1;
  stats.trials.resize(config.trials);
  const RandomStream root(config.seed, tag("recurrence"));
  const ExpandOptions options{.max_steps = config.max_steps, .exponent = stats.exponent};

  parallel_for(
      config.trials,
      [&](std::size_t i) {
        RandomStream rng = root.substream(i);
        TrialRecord& rec = stats.trials[i];
        rec.trial = i;
        const auto record = [&](const auto& trace) {
          const auto dec = stopping_decomposition(trace, config.C);
          rec.stages = dec.stop_indices.size();
          if (!dec.stop_indices.empty()) rec.first_stop = dec.stop_indices.front();
          rec.steps = trace.length();
          rec.termination = trace.termination();
        };
        if (config.mode == NumericMode::exact) {
          record(expand(ex, sampler.sample_scaled(rng, config.resolved_bits()), options));
        } else {
          record(expand(ex, sampler.sample_fast(rng), options));
        }
      },
      config.threads);

  stats.fraction_at_least.assign(config.k_max, 0.0);
  for (auto t : {Termination::max_steps, Termination::undefined_move, Termination::tie, Termination::zero_weight}) {
    stats.termination_histogram[t] = 0;
  }
  for (const auto& rec : stats.trials) {
    ++stats.termination_histogram[rec.termination];
    if (rec.termination != Termination::max_steps) continue;
    for (std::size_t k = 1; k <= std::min(rec.stages, config.k_max); ++k) stats.fraction_at_least[k - 1] += 1;
  }
  for (auto& f : stats.fraction_at_least) f /= static_cast<double>(config.trials);
  return stats;
}

nlohmann::json RecurrenceStats::to_json() const {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [t, count] : termination_histogram) hist[std::string(to_string(t))] = count;
  nlohmann::json trials_json = nlohmann::json::array();
  for (const auto& r : trials) {
    trials_json.push_back({{"trial", r.trial},
                           {"stages", r.stages},
                           {"first_stop", r.first_stop ? nlohmann::json(*r.first_stop) : nlohmann::json(nullptr)},
                           {"steps", r.steps},
                           {"termination", std::string(to_string(r.termination))}});
  }
  return {{"exchange", exchange},
          {"exponent", exponent},
          {"fraction_at_least", fraction_at_least},
          {"termination_histogram", hist},
          {"trials", trials_json}};
}

std::string RecurrenceStats::to_csv() const {
  std::ostringstream out;
  out << "trial,stages,first_stop,steps,termination\n";
  for (const auto& r : trials) {
    out << r.trial << ',' << r.stages << ',' << (r.first_stop ? std::to_string(*r.first_stop) : "") << ','
        << r.steps << ',' << to_string(r.termination) << '\n';
  }
  return out.str();
}

nlohmann::json TransportReport::to_json() const {
  return {{"distortion", distortion}, {"c", c},         {"source_ratio", source_ratio},
          {"source_se", source_se},   {"target_ratio", target_ratio}, {"target_se", target_se},
          {"lower", lower},           {"upper", upper}, {"margin", margin},
          {"holds", holds},           {"samples", samples}, {"exponent", exponent}};
}

std::string TransportReport::to_csv() const {
  std::ostringstream out;
  out << "distortion,c,source_ratio,source_se,target_ratio,target_se,lower,upper,margin,holds,samples\n";
  out << format_double(distortion) << ',' << format_double(c) << ',' << format_double(source_ratio) << ','
      << format_double(source_se) << ',' << format_double(target_ratio) << ',' << format_double(target_se) << ','
      << format_double(lower) << ',' << format_double(upper) << ',' << format_double(margin) << ','
      << (holds ? "true" : "false") << ',' << samples << '\n';
  return out.str();
}

TransportReport eq1_transport_check(const TransitionMatrix& q, const CarriedPolytope& poly,
                                    const ResolvedSelector& region, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw InsufficientSamplesError("transport check needs at least two samples");
  if (q.size() != poly.exchange().size()) throw DimensionMismatchError("stage and polytope sizes differ");
  TransportReport r;
  r.samples = samples;
  r.exponent = static_cast<int>(poly.dimension()) + 1;
  r.distortion = *distortion(q, poly, DistortionMode::exact).exact_value;
  r.c = r.distortion > 1.0 ? transport_constant(r.distortion) : 1.0;

  RandomStream rng(seed, tag("transport"));
  const auto points = PolytopeSampler(poly).stratified(samples, rng);
  const auto sums = scaled_column_sums(q);
  std::vector<double> log_norm(samples);
  std::vector<char> inside(samples);
  double min_log = kInf;
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = dot(sums, points[i].values());
    if (!(s > 0)) throw ZeroImageError("Qx = 0 at a sampled point");
    log_norm[i] = std::log(s);
    min_log = std::min(min_log, log_norm[i]);
    inside[i] = region.contains(points[i]);
  }
  // Jacobians relative to their maximum; the ratio is scale-free.
  double total = 0, in_total = 0;
  std::vector<double> jac(samples);
  std::size_t in_count = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    jac[i] = std::exp(-r.exponent * (log_norm[i] - min_log));
    total += jac[i];
    if (inside[i]) {
      in_total += jac[i];
      ++in_count;
    }
  }
  r.source_ratio = static_cast<double>(in_count) / static_cast<double>(samples);
  r.source_se = binomial_se(r.source_ratio, samples);
  r.target_ratio = in_total / total;
  double var = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double d = jac[i] * ((inside[i] ? 1.0 : 0.0) - r.target_ratio);
    var += d * d;
  }
  r.target_se = std::sqrt(var) / total;
  r.lower = r.c * r.source_ratio;
  r.upper = r.source_ratio / r.c;
  const double gap = r.upper - r.lower;
  if (gap > 0 && r.target_se > 0.1 * gap) {
    throw InsufficientSamplesError("target standard error " + format_double(r.target_se) + " exceeds 10% of the gap " +
                                   format_double(gap));
  }
  r.margin = std::min(r.target_ratio - r.lower, r.upper - r.target_ratio);
  const double se_lower = std::hypot(r.target_se, r.c * r.source_se);
  const double se_upper = std::hypot(r.target_se, r.source_se / r.c);
  r.holds = r.target_ratio >= r.lower - 3 * se_lower && r.target_ratio <= r.upper + 3 * se_upper;
  return r;
}

double decay_bound(double K, double C, std::size_t level) {
  return std::pow(1.0 - K * transport_constant(C), static_cast<double>(level));
}

nlohmann::json DecayConfig::to_json() const {
  return {{"C", C},
          {"selector", selector.to_json()},
          {"depth", depth},
          {"budget", budget},
          {"samples", samples},
          {"seed", seed},
          {"max_stage_steps", max_stage_steps},
          {"sample_bits", sample_bits}};
}

nlohmann::json DecayExperiment::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& l : levels) {
    rows.push_back({{"level", l.level},
                    {"alive", l.alive},
                    {"residual", l.residual},
                    {"standard_error", l.standard_error},
                    {"bound", l.bound},
                    {"stages", l.stages},
                    {"cylinders", l.cylinders},
                    {"uncovered", l.uncovered},
                    {"disjoint", l.disjoint}});
  }
  return {{"exchange", exchange},
          {"K", config.selector.proportion},
          {"c", c},
          {"exponent", exponent},
          {"budget_exhausted", budget_exhausted},
          {"final_bound", levels.empty() ? nlohmann::json(nullptr) : nlohmann::json(levels.back().bound)},
          {"levels", rows}};
}

std::string DecayExperiment::to_csv() const {
  std::ostringstream out;
  out << "level,alive,residual,standard_error,bound,stages,cylinders,uncovered,disjoint\n";
  for (const auto& l : levels) {
    out << l.level << ',' << l.alive << ',' << format_double(l.residual) << ',' << format_double(l.standard_error)
        << ',' << format_double(l.bound) << ',' << l.stages << ',' << l.cylinders << ',' << l.uncovered << ','
        << (l.disjoint ? "true" : "false") << '\n';
  }
  return out.str();
}

namespace {

struct Walker {
  Exchange exchange;
  ScaledWeights weights;
  // Winner row of every move since the root chart; identifies the cylinder.
  std::string path;
  bool alive = true;
  bool stuck = false;
};

class SelectorCache {
 public:
  SelectorCache(const SelectorSpec& spec, std::uint64_t seed) : spec_(spec), seed_(seed) {}

  std::shared_ptr<const ResolvedSelector> get(const Exchange& ex) {
    const std::string key = ex.to_string();
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto resolved = std::make_shared<const ResolvedSelector>(resolve_selector(spec_, carried_polytope(ex), seed_));
    std::lock_guard lock(mutex_);
    return cache_.emplace(key, std::move(resolved)).first->second;
  }

 private:
  SelectorSpec spec_;
  std::uint64_t seed_;
  std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const ResolvedSelector>> cache_;
};

bool prefix_free(std::vector<std::string> paths) {
  std::sort(paths.begin(), paths.end());
  for (std::size_t i = 1; i < paths.size(); ++i) {
    if (paths[i].starts_with(paths[i - 1])) return false;
  }
  return true;
}

}  // namespace

DecayExperiment decay_experiment(const Exchange& ex, const DecayConfig& config) {
  if (config.depth == 0) throw DomainError("decay depth must be at least 1");
  if (config.samples == 0) throw DomainError("decay experiment needs samples");
  DecayExperiment out;
  out.config = config;
  out.exchange = ex.to_string();
  out.c = transport_constant(config.C);
  const CarriedPolytope poly = carried_polytope(ex);
  out.exponent = static_cast<int>(poly.dimension()) + 1;
  const Rational bound_C = exact_rational(config.C);
  const double K = config.selector.proportion;
  SelectorCache selectors(config.selector, config.seed);

  const PolytopeSampler sampler(poly);
  const RandomStream root(config.seed, tag("decay"));
  std::vector<Walker> walkers;
  walkers.reserve(config.samples);
  for (std::size_t i = 0; i < config.samples; ++i) {
    RandomStream rng = root.substream(i);
    walkers.push_back({ex, sampler.sample_scaled(rng, config.sample_bits), {}, true, false});
  }
  out.levels.push_back({.level = 0, .alive = config.samples, .residual = 1.0, .bound = 1.0});

  std::size_t spent = 0;
  std::vector<char> harvested(config.samples);
  for (std::size_t level = 1; level <= config.depth; ++level) {
    std::vector<Walker> next = walkers;
    std::fill(harvested.begin(), harvested.end(), 0);
    parallel_for(
        config.samples,
        [&](std::size_t i) {
          Walker& w = next[i];
          if (!w.alive || w.stuck) return;
          const auto selector = selectors.get(w.exchange);
          if (selector->contains(to_fast(w.weights))) {
            w.alive = false;
            return;
          }
          StageAccumulator acc(w.exchange.size());
          for (std::size_t s = 0; s < config.max_stage_steps; ++s) {
            try {
              auto step = rauzy_step(w.exchange, w.weights);
              acc.push(step.move);
              w.path.push_back(step.move.winner_row == Row::top ? 't' : 'b');
              w.exchange = std::move(step.exchange);
              w.weights = std::move(step.weights);
            } catch (const Error&) {
              break;
            }
            if (qualifies(acc, out.exponent, bound_C)) {
              harvested[i] = 1;
              return;
            }
          }
          w.stuck = true;
        },
        config.threads);

    DecayLevel row{.level = level};
    std::vector<std::string> paths;
    for (std::size_t i = 0; i < config.samples; ++i) {
      row.alive += next[i].alive;
      row.uncovered += next[i].alive && next[i].stuck;
      if (harvested[i]) paths.push_back(next[i].path);
    }
    row.stages = paths.size();
    if (spent + row.stages > config.budget) {
      out.budget_exhausted = true;
      throw BudgetExhaustedError("stage budget of " + std::to_string(config.budget) + " exhausted at level " +
                                     std::to_string(level),
                                 out);
    }
    spent += row.stages;
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    row.cylinders = paths.size();
    row.disjoint = prefix_free(std::move(paths));
    row.residual = static_cast<double>(row.alive) / static_cast<double>(config.samples);
    row.standard_error = binomial_se(row.residual, config.samples);
    row.bound = decay_bound(K, config.C, level);
    out.levels.push_back(row);
    walkers = std::move(next);
  }
  return out;
}

}  // namespace rauzy
