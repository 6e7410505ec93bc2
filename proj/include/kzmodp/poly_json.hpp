#pragma once

// Canonical JSON form: {"vars":[...],"p":P,"terms":[{"exp":[...],"coef":c},...]}
// with terms in graded-lex descending order.

#include <json.hpp>

#include "kzmodp/poly.hpp"

namespace kzmodp {

nlohmann::json to_json(const FpPoly& f);

/// Throws std::invalid_argument on malformed input.
FpPoly poly_from_json(const nlohmann::json& j);

}  // namespace kzmodp
