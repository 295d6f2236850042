#pragma once

#include "rauzy/rauzy.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace rauzy {

// JSON-lines trace: a header (exchange, weights, convention, mode, config),
// one line per move, and a closing line with the termination state.
// `config` is embedded verbatim in the header.
std::string trace_to_jsonl(const ExpansionTrace& trace, std::size_t max_steps, const nlohmann::json& config);
std::string trace_to_jsonl(const FastTrace& trace, std::size_t max_steps, const nlohmann::json& config);

struct LoadedTrace {
  NumericMode mode = NumericMode::exact;
  nlohmann::json header;
  std::optional<ExpansionTrace> exact;
  std::optional<FastTrace> fast;
};

// Replays the recorded expansion and checks every line against the replay;
// throws ParseError on malformed input or any mismatch. Re-serializing the
// result reproduces the input byte for byte.
LoadedTrace trace_from_jsonl(const std::string& text);

}  // namespace rauzy
