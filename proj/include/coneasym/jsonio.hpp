#pragma once

#include <string>

#include <json.hpp>

namespace coneasym {

/// Serializes like json::dump but prints every float with 17 significant digits.
/// Non-finite floats become null. indent < 0 gives a single line.
std::string dump_json(const nlohmann::json& doc, int indent = -1);

/// Float formatted with 17 significant digits.
std::string format_double(double v);

}  // namespace coneasym
