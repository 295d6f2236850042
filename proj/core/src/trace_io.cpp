#include "rauzy/trace_io.hpp"

#include "rauzy/errors.hpp"
#include "rauzy/json_io.hpp"
#include "rauzy/version.hpp"

#include <sstream>

namespace rauzy {

namespace {

template <class Scalar>
std::string serialize(const BasicTrace<Scalar>& trace, NumericMode mode, std::size_t max_steps,
                      const nlohmann::json& config) {
  const Exchange& ex = trace.initial_exchange();
  const Alphabet& names = ex.alphabet();
  nlohmann::json header = {
      {"schema", kSchemaVersion},
      {"kind", "rauzy-trace"},
      {"tool_version", std::string(kToolVersion)},
      {"convention", std::string(kInductionConvention)},
      {"mode", std::string(to_string(mode))},
      {"exchange", ex.to_string()},
      {"alphabet", names.names()},
      {"weights", to_json(trace.initial_weights())},
      {"exponent", trace.exponent()},
      {"max_steps", max_steps},
      {"config", config},
  };
  std::string out = dump_json(header) + '\n';
  for (std::size_t k = 0; k < trace.length(); ++k) {
    const MoveRecord& m = trace.moves()[k];
    nlohmann::json line = {
        {"step", k + 1},
        {"winner", names.name(m.winner)},
        {"loser", names.name(m.loser)},
        {"winner_row", std::string(to_string(m.winner_row))},
        {"loser_row", std::string(to_string(m.loser_row))},
        {"insertion_row", std::string(to_string(m.insertion_row))},
        {"insertion_position", m.insertion_position},
        {"elementary", {{"row", names.name(m.winner)}, {"col", names.name(m.loser)}}},
        {"exchange", trace.exchange(k + 1).to_string()},
    };
    if (mode == NumericMode::fast) line["scale"] = format_double(trace.scale(k + 1));
    out += dump_json(line) + '\n';
  }
  nlohmann::json footer = {
      {"termination", std::string(to_string(trace.termination()))},
      {"steps", trace.length()},
      {"final_exchange", trace.exchange(trace.length()).to_string()},
      {"final_weights", to_json(trace.weights(trace.length()))},
  };
  out += dump_json(footer) + '\n';
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string trace_to_jsonl(const ExpansionTrace& trace, std::size_t max_steps, const nlohmann::json& config) {
  return serialize(trace, NumericMode::exact, max_steps, config);
}

std::string trace_to_jsonl(const FastTrace& trace, std::size_t max_steps, const nlohmann::json& config) {
  return serialize(trace, NumericMode::fast, max_steps, config);
}

LoadedTrace trace_from_jsonl(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw ParseError("trace needs a header and a termination line");
  LoadedTrace out;
  std::string replay;
  try {
    out.header = nlohmann::json::parse(lines.front());
    const auto& h = out.header;
    if (h.value("kind", "") != "rauzy-trace") throw ParseError("not a rauzy trace");
    if (h.at("schema").get<int>() != kSchemaVersion) throw ParseError("unsupported trace schema");
    if (h.at("convention").get<std::string>() != kInductionConvention) {
      throw ParseError("trace was produced under a different induction convention");
    }
    out.mode = parse_numeric_mode(h.at("mode").get<std::string>());
    const Exchange ex = Exchange::parse(h.at("exchange").get<std::string>());
    const ExpandOptions options{.max_steps = h.at("max_steps").get<std::size_t>(),
                                .exponent = h.at("exponent").get<int>()};
    if (out.mode == NumericMode::exact) {
      out.exact = expand(ex, weights_from_json(ex.alphabet_ptr(), h.at("weights")), options);
      replay = trace_to_jsonl(*out.exact, options.max_steps, h.at("config"));
    } else {
      out.fast = expand(ex, fast_weights_from_json(ex.alphabet_ptr(), h.at("weights")), options);
      replay = trace_to_jsonl(*out.fast, options.max_steps, h.at("config"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed trace header: ") + e.what());
  }
  const auto expected = split_lines(replay);
  if (expected.size() != lines.size()) {
    throw ParseError("trace has " + std::to_string(lines.size()) + " lines but its replay has " +
                     std::to_string(expected.size()));
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (nlohmann::json::parse(lines[i], nullptr, false) != nlohmann::json::parse(expected[i])) {
      throw ParseError("trace line " + std::to_string(i + 1) + " disagrees with the replayed expansion");
    }
  }
  return out;
}

}  // namespace rauzy
