#pragma once

// Internal JSON helpers shared by the container format and the config
// parser. Not part of the public headers so the JSON dependency stays an
// implementation detail.

#include <string>

#include <json.hpp>

#include "stomo/errors.hpp"
#include "stomo/types.hpp"

namespace stomo {

nlohmann::json geometry_to_json(const ScanGeometry& g);

// Builds and validates a geometry; `where` prefixes error messages.
ScanGeometry geometry_from_json(const nlohmann::json& j, const std::string& where);

// Throws if `j` (an object) holds keys outside `allowed`; used to make
// unknown keys hard errors everywhere.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& where);

} // namespace stomo
