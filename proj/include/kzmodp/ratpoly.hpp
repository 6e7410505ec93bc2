#pragma once

// Sparse polynomials with exact rational coefficients.

#include <map>
#include <string>
#include <vector>

#include "kzmodp/poly.hpp"
#include "kzmodp/rational.hpp"

namespace kzmodp {

class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<std::string> vars);

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational, GradedLexGreater>& terms() const { return terms_; }

  Rational coeff(const Monomial& m) const;
  void add_term(const Monomial& m, const Rational& c);

  /// Minimum p-adic valuation over the coefficients; 0 for the zero polynomial.
  int min_valuation(std::uint32_t p) const;
  /// Termwise image over F_p; throws std::domain_error on a p-divisible denominator.
  FpPoly reduce(std::uint32_t p) const;

 private:
  std::vector<std::string> vars_;
  std::map<Monomial, Rational, GradedLexGreater> terms_;
};

}  // namespace kzmodp
