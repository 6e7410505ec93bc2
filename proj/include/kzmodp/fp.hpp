#pragma once

// Prime field F_p helpers. Elements are canonical representatives in [0, p-1]
// with p < 2^31; products go through 64-bit intermediates.

#include <cstdint>
#include <stdexcept>

namespace kzmodp {

using Fp = std::uint32_t;

inline constexpr std::uint32_t kMaxModulus = (1u << 31);

namespace fp {

inline Fp add(Fp a, Fp b, std::uint32_t p) {
  std::uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline Fp sub(Fp a, Fp b, std::uint32_t p) { return a >= b ? a - b : a + p - b; }

inline Fp neg(Fp a, std::uint32_t p) { return a == 0 ? 0 : p - a; }

inline Fp mul(Fp a, Fp b, std::uint32_t p) {
  return static_cast<Fp>(static_cast<std::uint64_t>(a) * b % p);
}

inline Fp from_int(std::int64_t v, std::uint32_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<Fp>(r < 0 ? r + p : r);
}

inline Fp from_uint(std::uint64_t v, std::uint32_t p) { return static_cast<Fp>(v % p); }

Fp pow(Fp base, std::uint64_t e, std::uint32_t p);

/// Inverse of a nonzero element; throws std::domain_error on zero.
Fp inv(Fp a, std::uint32_t p);

/// Binomial coefficient C(n, k) mod p for arbitrary n, k (via Lucas digits).
Fp binom(std::uint64_t n, std::uint64_t k, std::uint32_t p);

/// (-1)^e as an element of F_p.
inline Fp sign(std::uint64_t e, std::uint32_t p) { return (e & 1u) ? p - 1 : 1; }

}  // namespace fp

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Multiplicative order of a modulo m (gcd(a, m) = 1 required, m >= 2).
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m);

}  // namespace kzmodp
