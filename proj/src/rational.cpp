#include "kzmodp/rational.hpp"

#include <stdexcept>

namespace kzmodp {

int p_valuation(const BigInt& x, std::uint32_t p) {
  if (x == 0) throw std::domain_error("valuation of zero");
  BigInt y = abs(x);
  int v = 0;
  while (y % p == 0) {
    y /= p;
    ++v;
  }
  return v;
}

int p_valuation(const Rational& x, std::uint32_t p) {
  return p_valuation(numerator(x), p) - p_valuation(denominator(x), p);
}

Fp reduce_mod_p(const BigInt& x, std::uint32_t p) {
  BigInt r = x % p;
  if (r < 0) r += p;
  return static_cast<Fp>(r);
}

Fp reduce_mod_p(const Rational& x, std::uint32_t p) {
  Fp den = reduce_mod_p(denominator(x), p);
  if (den == 0) throw std::domain_error("reduce_mod_p: denominator divisible by p");
  return fp::mul(reduce_mod_p(numerator(x), p), fp::inv(den, p), p);
}

}  // namespace kzmodp
