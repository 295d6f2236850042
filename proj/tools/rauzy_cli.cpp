#include "rauzy/errors.hpp"
#include "rauzy/exchange.hpp"
#include "rauzy/json_io.hpp"
#include "rauzy/matrix.hpp"
#include "rauzy/montecarlo.hpp"
#include "rauzy/polytope.hpp"
#include "rauzy/projective.hpp"
#include "rauzy/rauzy.hpp"
#include "rauzy/rng.hpp"
#include "rauzy/trace_io.hpp"
#include "rauzy/version.hpp"
#include "rauzy/weights.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace rauzy;

enum Exit { kOk = 0, kConfig = 2, kDomain = 3, kBudget = 4 };

struct Global {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string mode = "exact";
  std::string out;
  bool quiet = false;

  NumericMode numeric_mode() const { return parse_numeric_mode(mode); }
};

class Output {
 public:
  explicit Output(const Global& g) : g_(g) {}

  // Writes the primary document: to --out when given, else to stdout.
  void primary(const std::string& text, const std::string& extension) const {
    if (g_.out.empty()) {
      std::cout << text;
      return;
    }
    write_file(path(extension), text);
  }

  // Secondary tables are only produced alongside --out.
  void table(const std::string& text) const {
    if (!g_.out.empty()) write_file(path(".csv"), text);
  }

  void summary(const std::string& line) const {
    if (!g_.quiet && !g_.out.empty()) std::cout << line << '\n';
  }

 private:
  std::string path(const std::string& extension) const {
    for (const char* known : {".json", ".jsonl", ".csv"}) {
      const std::string k = known;
      if (g_.out.size() > k.size() && g_.out.ends_with(k)) return g_.out.substr(0, g_.out.size() - k.size()) + extension;
    }
    return g_.out + extension;
  }

  static void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
  }

  const Global& g_;
};

json document(const std::string& command, const Global& g, json config) {
  config["seed"] = g.seed;
  config["mode"] = g.mode;
  return {{"schema", kSchemaVersion},
          {"tool_version", std::string(kToolVersion)},
          {"command", command},
          {"seed", g.seed},
          {"mode", g.mode},
          {"config", std::move(config)}};
}

std::string pretty(const json& doc) { return dump_json(doc, 2) + '\n'; }

// Classical exchange on n letters whose carried polytope is the full simplex.
Exchange rotation_exchange(std::size_t n) {
  std::vector<std::string> top, bottom;
  for (std::size_t i = 0; i < n; ++i) {
    top.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i)) : "l" + std::to_string(i));
  }
  bottom.assign(top.rbegin(), top.rend());
  return Exchange::from_labels(top, bottom);
}

json vertices_json(const CarriedPolytope& poly) {
  json out = json::array();
  for (const auto& v : poly.vertices()) out.push_back(to_json(v));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string summary_double(double v) { return format_double(v); }

// polytope

struct PolytopeArgs {
  std::string exchange;
};

int run_polytope(const Global& g, const PolytopeArgs& a) {
  const Exchange ex = Exchange::parse(a.exchange);
  const CarriedPolytope poly = carried_polytope(ex);
  json doc = document("polytope", g, {{"exchange", ex.to_string()}});
  json coef = json::object();
  for (std::size_t i = 0; i < ex.size(); ++i) coef[ex.alphabet().names()[i]] = ex.switch_coefficients()[i];
  doc["result"] = {{"exchange", ex.to_string()},
                   {"alphabet", ex.alphabet().names()},
                   {"classical", ex.is_classical()},
                   {"switch_coefficients", coef},
                   {"dimension", poly.dimension()},
                   {"vertices", vertices_json(poly)},
                   {"full_simplex", poly.is_full_simplex()},
                   {"simplices", poly.triangulation().size()},
                   {"volume", poly.volume()}};
  Output out(g);
  out.primary(pretty(doc), ".json");
  out.summary("dimension " + std::to_string(poly.dimension()) + ", " + std::to_string(poly.vertices().size()) +
              " vertices");
  return kOk;
}

// expand

struct ExpandArgs {
  std::string exchange;
  std::string weights;
  std::size_t steps = 100;
  unsigned bits = 0;
};

int run_expand(const Global& g, const ExpandArgs& a) {
  const Exchange ex = Exchange::parse(a.exchange);
  if (a.weights.empty() && !g.seed_given) throw ParseError("expand needs --weights or --seed");
  const unsigned bits = a.bits ? a.bits : static_cast<unsigned>(std::max<std::size_t>(256, 4 * a.steps + 256));
  json config = {{"exchange", ex.to_string()}, {"steps", a.steps}, {"seed", g.seed}, {"mode", g.mode}};
  json sampled = nullptr;
  std::optional<WeightVector> w;
  std::optional<FastWeights> fw;
  if (!a.weights.empty()) {
    w = parse_weights(ex.alphabet_ptr(), a.weights);
    config["weights"] = to_json(*w);
  } else {
    const CarriedPolytope poly = carried_polytope(ex);
    RandomStream rng(g.seed, 0);
    if (g.numeric_mode() == NumericMode::exact) {
      w = PolytopeSampler(poly).sample_exact(rng, bits);
      config["sample_bits"] = bits;
    } else {
      fw = PolytopeSampler(poly).sample_fast(rng);
    }
    config["weights"] = nullptr;
  }
  std::string text;
  std::string summary;
  if (g.numeric_mode() == NumericMode::exact) {
    const auto trace = expand(ex, *w, a.steps);
    text = trace_to_jsonl(trace, a.steps, config);
    summary = std::to_string(trace.length()) + " steps, termination " + std::string(to_string(trace.termination()));
  } else {
    if (!fw) fw = to_fast(normalized(*w));
    const auto trace = expand(ex, *fw, a.steps);
    text = trace_to_jsonl(trace, a.steps, config);
    summary = std::to_string(trace.length()) + " steps, termination " + std::string(to_string(trace.termination()));
  }
  Output out(g);
  out.primary(text, ".jsonl");
  out.summary(summary);
  return kOk;
}

// distort

struct DistortArgs {
  std::string trace;
  std::string stage;
  std::string exchange;
  std::optional<double> C;
  std::optional<std::size_t> from;
  std::optional<std::size_t> to;
};

json stage_json(const TransitionMatrix& q, const CarriedPolytope& domain) {
  const auto report = distortion(q, domain, DistortionMode::exact);
  json j = to_json(report);
  j["matrix"] = to_json(q);
  j["domain_exchange"] = domain.exchange().to_string();
  return j;
}

template <class Scalar>
json analyse_trace(const BasicTrace<Scalar>& trace, const DistortArgs& a, std::string& summary) {
  json result = {{"exchange", trace.initial_exchange().to_string()},
                 {"length", trace.length()},
                 {"exponent", trace.exponent()},
                 {"termination", std::string(to_string(trace.termination()))}};
  if (a.from || a.to) {
    const std::size_t i = a.from.value_or(0);
    const std::size_t j = a.to.value_or(trace.length());
    const auto q = trace.stage_matrix(i, j);
    json s = stage_json(q, carried_polytope(trace.exchange(j)));
    s["from"] = i;
    s["to"] = j;
    result["stage"] = s;
    summary = "stage (" + std::to_string(i) + ", " + std::to_string(j) + ") distortion " +
              summary_double(*distortion(q, carried_polytope(trace.exchange(j)), DistortionMode::exact).exact_value);
  }
  if (a.C) {
    const auto dec = stopping_decomposition(trace, *a.C);
    json stages = json::array();
    std::size_t start = 0;
    for (std::size_t k = 0; k < dec.stop_indices.size(); ++k) {
      const std::size_t stop = dec.stop_indices[k];
      json s = stage_json(dec.stage_matrices[k], carried_polytope(trace.exchange(stop)));
      s["from"] = start;
      s["to"] = stop;
      stages.push_back(std::move(s));
      start = stop;
    }
    result["decomposition"] = {{"C", *a.C},
                               {"stop_indices", dec.stop_indices},
                               {"stages", stages},
                               {"remainder_start", dec.remainder_start},
                               {"remainder_length", dec.trace_length - dec.remainder_start}};
    summary = std::to_string(dec.stop_indices.size()) + " stages";
    if (!dec.stop_indices.empty()) {
      summary += ", first stop at step " + std::to_string(dec.stop_indices.front()) + ", distortion " +
                 summary_double(dec.reports.front().colsum_bound);
    }
  }
  return result;
}

int run_distort(const Global& g, const DistortArgs& a) {
  if (a.trace.empty() == a.stage.empty()) throw ParseError("distort needs exactly one of --trace or --stage");
  json config = {{"trace", a.trace}, {"stage", a.stage}, {"exchange", a.exchange}};
  config["C"] = a.C ? json(*a.C) : json(nullptr);
  config["from"] = a.from ? json(*a.from) : json(nullptr);
  config["to"] = a.to ? json(*a.to) : json(nullptr);
  json doc = document("distort", g, config);
  std::string summary;
  if (!a.trace.empty()) {
    const auto loaded = trace_from_jsonl(read_file(a.trace));
    doc["result"] = loaded.exact ? analyse_trace(*loaded.exact, a, summary) : analyse_trace(*loaded.fast, a, summary);
  } else {
    const auto q = parse_matrix(a.stage);
    const Exchange ex = a.exchange.empty() ? rotation_exchange(q.size()) : Exchange::parse(a.exchange);
    const CarriedPolytope poly = carried_polytope(ex);
    json s = stage_json(q, poly);
    const auto report = distortion(q, poly, DistortionMode::exact);
    if (a.C) {
      s["C"] = *a.C;
      s["c_distorted"] = q.all_positive() && colsum_within(q.column_sums(), report.exponent, exact_rational(*a.C));
    }
    doc["result"] = s;
    summary = "distortion " + summary_double(*report.exact_value) + " (colsum bound " +
              summary_double(report.colsum_bound) + ")";
  }
  Output out(g);
  out.primary(pretty(doc), ".json");
  out.summary(summary);
  return kOk;
}

// recurrence

struct RecurrenceArgs {
  std::string exchange;
  double C = 4.0;
  std::size_t steps = 200;
  std::size_t trials = 1000;
  std::size_t k_max = 5;
  unsigned bits = 0;
};

int run_recurrence(const Global& g, const RecurrenceArgs& a) {
  const Exchange ex = Exchange::parse(a.exchange);
  RecurrenceConfig cfg{.C = a.C,
                       .max_steps = a.steps,
                       .trials = a.trials,
                       .seed = g.seed,
                       .mode = g.numeric_mode(),
                       .sample_bits = a.bits ? std::optional<unsigned>(a.bits) : std::nullopt,
                       .k_max = a.k_max,
                       .threads = 0};
  const auto stats = recurrence_experiment(ex, cfg);
  json config = cfg.to_json();
  config["exchange"] = ex.to_string();
  json doc = document("recurrence", g, config);
  doc["result"] = stats.to_json();
  Output out(g);
  out.primary(pretty(doc), ".json");
  out.table(stats.to_csv());
  std::string line;
  for (std::size_t k = 1; k <= a.k_max; ++k) {
    line += (k > 1 ? " " : "") + std::string("fraction(>=") + std::to_string(k) + ")=" + summary_double(stats.fraction(k));
  }
  out.summary(line);
  return kOk;
}

// decay

struct DecayArgs {
  std::string exchange = "a b | b a";
  double C = 2.0;
  double K = 0.3;
  std::string selector = "halfspace";
  std::size_t depth = 10;
  std::size_t budget = 1'000'000;
  std::size_t samples = 4096;
  std::size_t stage_steps = 2048;
  unsigned bits = 4096;
};

int run_decay(const Global& g, const DecayArgs& a) {
  const Exchange ex = Exchange::parse(a.exchange);
  if (!(a.K > 0 && a.K < 1)) throw ParseError("--K must lie in (0, 1)");
  // --selector names the shape; the proportion always comes from --K.
  const auto colon = a.selector.find(':');
  const std::string kind = a.selector.substr(0, colon);
  if (kind != "halfspace" && kind != "vertex-cap" && kind != "custom") {
    throw ParseError("decay selector must be halfspace, vertex-cap or custom");
  }
  const SelectorSpec spec = parse_selector(kind + ":" + format_double(a.K) +
                                           (colon == std::string::npos ? "" : a.selector.substr(colon)));
  DecayConfig cfg{.C = a.C,
                  .selector = spec,
                  .depth = a.depth,
                  .budget = a.budget,
                  .samples = a.samples,
                  .seed = g.seed,
                  .max_stage_steps = a.stage_steps,
                  .sample_bits = a.bits,
                  .threads = 0};
  json config = cfg.to_json();
  config["exchange"] = ex.to_string();
  config["K"] = a.K;
  DecayExperiment result;
  int code = kOk;
  try {
    result = decay_experiment(ex, cfg);
  } catch (const BudgetExhaustedError& e) {
    std::cerr << "rauzy: " << e.what() << '\n';
    result = e.partial();
    code = kBudget;
  }
  json doc = document("decay", g, config);
  doc["result"] = result.to_json();
  Output out(g);
  out.primary(pretty(doc), ".json");
  out.table(result.to_csv());
  const auto& last = result.levels.back();
  out.summary("level " + std::to_string(last.level) + ": residual " + summary_double(last.residual) + " bound " +
              summary_double(last.bound));
  return code;
}

// transport

struct TransportArgs {
  std::string stage;
  std::string exchange;
  std::string region = "half";
  std::size_t samples = 100000;
};

int run_transport(const Global& g, const TransportArgs& a) {
  const auto q = parse_matrix(a.stage);
  const Exchange ex = a.exchange.empty() ? rotation_exchange(q.size()) : Exchange::parse(a.exchange);
  const CarriedPolytope poly = carried_polytope(ex);
  const SelectorSpec spec = parse_selector(a.region);
  const auto region = resolve_selector(spec, poly, g.seed);
  const auto report = eq1_transport_check(q, poly, region, a.samples, g.seed);
  json config = {{"stage", to_json(q)}, {"exchange", ex.to_string()}, {"region", spec.to_json()}, {"samples", a.samples}};
  json doc = document("transport", g, config);
  doc["result"] = report.to_json();
  doc["result"]["region"] = region.to_json();
  Output out(g);
  out.primary(pretty(doc), ".json");
  out.table(report.to_csv());
  out.summary(std::string("sandwich-holds: ") + (report.holds ? "true" : "false") + " margin " +
              summary_double(report.margin));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rauzy induction laboratory for non-classical exchanges"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "experiment seed")->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--mode", g.mode, "numeric mode")->check(CLI::IsMember({"exact", "fast"}));
  app.add_option("--out", g.out, "output path");
  app.add_flag("--quiet", g.quiet, "suppress the summary line");

  PolytopeArgs pa;
  auto* polytope = app.add_subcommand("polytope", "vertices and dimension of the carried polytope");
  polytope->add_option("--exchange", pa.exchange, "exchange, e.g. \"a a b | b c c\"")->required();

  ExpandArgs ea;
  auto* expand_cmd = app.add_subcommand("expand", "iterate Rauzy induction and write a JSON-lines trace");
  expand_cmd->add_option("--exchange", ea.exchange)->required();
  expand_cmd->add_option("--weights", ea.weights, "e.g. \"a=0.25,b=1/2,c=0.25\"");
  expand_cmd->add_option("--steps", ea.steps)->capture_default_str();
  expand_cmd->add_option("--bits", ea.bits, "precision of sampled exact weights");

  DistortArgs da;
  auto* distort = app.add_subcommand("distort", "distortion reports and stopping decompositions");
  distort->add_option("--trace", da.trace, "trace file written by expand");
  distort->add_option("--stage", da.stage, "matrix, e.g. \"[[2,1],[1,1]]\"");
  distort->add_option("--exchange", da.exchange, "domain exchange for --stage");
  distort->add_option("--C", da.C, "distortion constant");
  distort->add_option("--from", da.from, "stage start index");
  distort->add_option("--to", da.to, "stage end index");

  RecurrenceArgs ra;
  auto* recurrence = app.add_subcommand("recurrence", "recurrence of C-distorted stages along sampled expansions");
  recurrence->add_option("--exchange", ra.exchange)->required();
  recurrence->add_option("--C", ra.C)->capture_default_str();
  recurrence->add_option("--steps", ra.steps)->capture_default_str();
  recurrence->add_option("--trials", ra.trials)->capture_default_str();
  recurrence->add_option("--kmax", ra.k_max)->capture_default_str();
  recurrence->add_option("--bits", ra.bits, "precision of sampled exact weights");

  DecayArgs ya;
  auto* decay = app.add_subcommand("decay", "nested measure-decay simulation");
  decay->add_option("--exchange", ya.exchange)->capture_default_str();
  decay->add_option("--C", ya.C)->capture_default_str();
  decay->add_option("--K", ya.K)->capture_default_str();
  decay->add_option("--selector", ya.selector, "halfspace, vertex-cap[:k] or custom:a=1,b=-1[:t]")->capture_default_str();
  decay->add_option("--depth", ya.depth)->capture_default_str();
  decay->add_option("--budget", ya.budget)->capture_default_str();
  decay->add_option("--samples", ya.samples)->capture_default_str();
  decay->add_option("--stage-steps", ya.stage_steps)->capture_default_str();
  decay->add_option("--bits", ya.bits)->capture_default_str();

  TransportArgs ta;
  auto* transport = app.add_subcommand("transport", "Monte Carlo check of measure-ratio transport");
  transport->add_option("--stage", ta.stage)->required();
  transport->add_option("--exchange", ta.exchange, "domain exchange; default full simplex");
  transport->add_option("--region", ta.region, "half, whole or a selector spec")->capture_default_str();
  transport->add_option("--samples", ta.samples)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  try {
    if (*polytope) return run_polytope(g, pa);
    if (*expand_cmd) return run_expand(g, ea);
    if (*distort) return run_distort(g, da);
    if (*recurrence) return run_recurrence(g, ra);
    if (*decay) return run_decay(g, ya);
    if (*transport) return run_transport(g, ta);
  } catch (const ParseError& e) {
    std::cerr << "rauzy: " << e.what() << '\n';
    return kConfig;
  } catch (const LabelCountError& e) {
    std::cerr << "rauzy: " << e.what() << '\n';
    return kConfig;
  } catch (const EmptyRowError& e) {
    std::cerr << "rauzy: " << e.what() << '\n';
    return kConfig;
  } catch (const AlphabetMismatchError& e) {
    std::cerr << "rauzy: " << e.what() << '\n';
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "rauzy: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "rauzy: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
