#pragma once

// JSON forms of configurations, solution bases and Hasse-Witt blocks.

#include <json.hpp>

#include "kzmodp/cartier.hpp"
#include "kzmodp/kz.hpp"
#include "kzmodp/poly_json.hpp"

namespace kzmodp {

nlohmann::json to_json(const PrimeConfig& cfg);
nlohmann::json to_json(const PolyVector& v);
/// Members as {"p","q","n","lambda","M","kind","m","l","degree","vec"}.
nlohmann::json to_json(const SolutionBasis& basis);
nlohmann::json to_json(const HasseWittBlock& blk);

/// Throws std::invalid_argument on malformed input or mismatched variables.
PolyVector poly_vector_from_json(const nlohmann::json& j);

}  // namespace kzmodp
