#pragma once

#include <string>

#include <json.hpp>

namespace fieldsens::cli {

using Json = nlohmann::ordered_json;

/// Six significant digits, round-to-nearest on the exact binary value.
/// Fixed notation for 1e-3 <= |x| < 1e6, scientific otherwise; trailing
/// zeros are dropped so the text is identical on every platform.
std::string format_number(double x);

/// Indented JSON with keys in insertion order and numbers via format_number.
std::string render_json(const Json& value, bool pretty = true);

/// "path = value" lines, one per leaf.
std::string render_text(const Json& value);

/// Two-column key,value CSV of the same leaves.
std::string render_key_value_csv(const Json& value);

}  // namespace fieldsens::cli
