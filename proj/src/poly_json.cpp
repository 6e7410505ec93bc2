#include "kzmodp/poly_json.hpp"

#include <stdexcept>

namespace kzmodp {

nlohmann::json to_json(const FpPoly& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : f.sorted_terms()) {
    nlohmann::json exp = nlohmann::json::array();
    for (std::size_t i = 0; i < f.nvars(); ++i) exp.push_back(m[i]);
    terms.push_back({{"exp", std::move(exp)}, {"coef", c}});
  }
  return {{"vars", f.vars()}, {"p", f.p()}, {"terms", std::move(terms)}};
}

FpPoly poly_from_json(const nlohmann::json& j) {
  try {
    auto vars = j.at("vars").get<std::vector<std::string>>();
    auto p = j.at("p").get<std::uint32_t>();
    if (!is_prime(p)) throw std::invalid_argument("polynomial modulus is not prime");
    FpPoly f(vars, p);
    for (const auto& t : j.at("terms")) {
      auto exp = t.at("exp").get<std::vector<std::uint32_t>>();
      if (exp.size() != vars.size()) throw std::invalid_argument("exponent vector length mismatch");
      auto c = t.at("coef").get<std::int64_t>();
      if (c <= 0 || c >= static_cast<std::int64_t>(p)) throw std::invalid_argument("coefficient not canonical");
      Monomial m;
      for (std::size_t i = 0; i < exp.size(); ++i) m[i] = exp[i];
      if (f.coeff(m) != 0) throw std::invalid_argument("duplicate term");
      f.set_term(m, static_cast<Fp>(c));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed polynomial JSON: ") + e.what());
  }
}

}  // namespace kzmodp
