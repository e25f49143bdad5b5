#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace loopspace {

/// Order-preserving JSON document; keys appear exactly as inserted so equal
/// inputs render byte-identically.
using Json = nlohmann::ordered_json;

/// Two-space indented dump with a trailing newline.
std::string render_json(const Json& doc);

/// Plain text table with left-aligned, padded columns.
struct TextTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string render_table(const TextTable& t);

}  // namespace loopspace
