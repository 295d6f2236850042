#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace rauzy {

// Deterministic JSON text. Keys are sorted, floating-point values use 17
// significant digits, non-finite doubles become null. indent < 0 gives a
// single line.
std::string dump_json(const nlohmann::json& value, int indent = -1);

}  // namespace rauzy
