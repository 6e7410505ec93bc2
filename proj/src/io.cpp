#include "kzmodp/io.hpp"

#include <stdexcept>

namespace kzmodp {

nlohmann::json to_json(const PrimeConfig& cfg) {
  return {{"p", cfg.p}, {"q", cfg.q}, {"n", cfg.n}, {"k", cfg.k}, {"d", cfg.d}, {"a", cfg.a}, {"A", cfg.A}};
}

nlohmann::json to_json(const PolyVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : v) out.push_back(to_json(f));
  return out;
}

nlohmann::json to_json(const SolutionBasis& basis) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& s : basis.members)
    members.push_back({{"p", basis.cfg.p},
                       {"q", basis.cfg.q},
                       {"n", basis.cfg.n},
                       {"lambda", basis.lambda},
                       {"M", basis.M},
                       {"kind", to_string(basis.kind)},
                       {"m", s.m},
                       {"l", s.l},
                       {"degree", s.degree},
                       {"vec", to_json(s.vec)}});
  return {{"kind", to_string(basis.kind)},
          {"lambda", basis.lambda},
          {"M", basis.M},
          {"excluded_zero", basis.excluded_zero},
          {"solutions", members}};
}

nlohmann::json to_json(const HasseWittBlock& blk) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : blk.entries) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& e : r) row.push_back(to_json(e));
    rows.push_back(std::move(row));
  }
  return {{"a", blk.a},
          {"eta_a", blk.eta_a},
          {"rows", blk.rows},
          {"cols", blk.cols},
          {"semilinear", blk.semilinear},
          {"entries", std::move(rows)}};
}

PolyVector poly_vector_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("solution vector must be a nonempty array");
  PolyVector out;
  for (const auto& x : j) {
    out.push_back(poly_from_json(x));
    out.back().check_compatible(out.front());
  }
  return out;
}

}  // namespace kzmodp
