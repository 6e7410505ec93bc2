#pragma once

// Deliberately naive reference computations used to cross-check the library.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "kzmodp/poly.hpp"
#include "kzmodp/rational.hpp"

namespace oracle {

using kzmodp::BigInt;
using kzmodp::FpPoly;
using kzmodp::Monomial;
using kzmodp::Rational;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline BigInt factorial(unsigned m) {
  BigInt r = 1;
  for (unsigned i = 2; i <= m; ++i) r *= i;
  return r;
}

inline std::uint32_t binom_mod(unsigned n, unsigned m, std::uint32_t p) {
  if (m > n) return 0;
  BigInt c = factorial(n) / (factorial(m) * factorial(n - m));
  return static_cast<std::uint32_t>(c % p);
}

/// binom(x, m) = x (x-1) ... (x-m+1) / m! over Q.
inline Rational binom(const Rational& x, std::uint64_t m) {
  Rational r = 1;
  for (std::uint64_t i = 0; i < m; ++i) r = r * (x - Rational(i)) / Rational(i + 1);
  return r;
}

/// a^{-1} mod p by brute force.
inline std::uint32_t inverse(std::uint32_t a, std::uint32_t p) {
  for (std::uint32_t x = 1; x < p; ++x)
    if (static_cast<std::uint64_t>(a) * x % p == 1) return x;
  return 0;
}

inline std::uint64_t order(std::uint64_t a, std::uint64_t m) {
  std::uint64_t x = a % m;
  for (std::uint64_t r = 1; r <= m; ++r, x = x * a % m)
    if (x == 1) return r;
  return 0;
}

/// Schoolbook product through an ordered map.
inline FpPoly product(const FpPoly& a, const FpPoly& b) {
  std::map<std::vector<std::uint32_t>, std::uint64_t> acc;
  const std::size_t n = a.nvars();
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      std::vector<std::uint32_t> e(n);
      for (std::size_t i = 0; i < n; ++i) e[i] = ma[i] + mb[i];
      acc[e] = (acc[e] + static_cast<std::uint64_t>(ca) * cb) % a.p();
    }
  FpPoly out(a.vars(), a.p());
  for (const auto& [e, c] : acc) {
    Monomial m;
    for (std::size_t i = 0; i < n; ++i) m[i] = e[i];
    out.add_term(m, static_cast<kzmodp::Fp>(c));
  }
  return out;
}

inline FpPoly power(const FpPoly& f, std::uint64_t e) {
  FpPoly r = FpPoly::constant(f.vars(), f.p(), 1);
  for (std::uint64_t i = 0; i < e; ++i) r = product(r, f);
  return r;
}

inline FpPoly random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars, std::uint32_t p,
                          std::size_t terms, std::uint32_t max_exp) {
  FpPoly f(vars, p);
  for (std::size_t t = 0; t < terms; ++t) {
    Monomial m;
    for (std::size_t i = 0; i < vars.size(); ++i) m[i] = static_cast<std::uint32_t>(rng() % (max_exp + 1));
    f.add_term(m, static_cast<kzmodp::Fp>(rng() % p));
  }
  return f;
}

/// f evaluated at a point of F_p^n by Horner-free direct summation.
inline std::uint32_t evaluate(const FpPoly& f, const std::vector<std::uint32_t>& x) {
  const std::uint32_t p = f.p();
  std::uint64_t s = 0;
  for (const auto& [m, c] : f.terms()) {
    std::uint64_t t = c;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::uint32_t k = 0; k < m[i]; ++k) t = t * x[i] % p;
    s = (s + t) % p;
  }
  return static_cast<std::uint32_t>(s);
}

}  // namespace oracle
