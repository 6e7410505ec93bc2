#include "kzmodp/ratpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace kzmodp {

RatPoly::RatPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {
  if (vars_.size() > kMaxVars) throw std::invalid_argument("too many variables");
}

Rational RatPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void RatPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int RatPoly::min_valuation(std::uint32_t p) const {
  if (terms_.empty()) return 0;
  int v = p_valuation(terms_.begin()->second, p);
  for (const auto& [m, c] : terms_) v = std::min(v, p_valuation(c, p));
  return v;
}

FpPoly RatPoly::reduce(std::uint32_t p) const {
  FpPoly out(vars_, p);
  for (const auto& [m, c] : terms_) out.add_term(m, reduce_mod_p(c, p));
  return out;
}

}  // namespace kzmodp
