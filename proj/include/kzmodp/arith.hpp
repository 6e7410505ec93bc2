#pragma once

// Prime-pair configuration, base-p digits and binomial congruences.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kzmodp/fp.hpp"

namespace kzmodp {

/// Invalid user-supplied parameters. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PrimeConfig {
  std::uint32_t p = 0;
  std::uint32_t q = 0;
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint32_t d = 0;           // order of p mod q
  std::vector<std::uint32_t> a;  // a_0..a_d, a_0 = a_d = 1
  std::vector<std::uint32_t> A;  // A_0..A_{d-1}

  std::uint32_t a_at(std::uint64_t s) const { return a[s % d]; }
  std::uint32_t A_at(std::uint64_t s) const { return A[s % d]; }
  std::uint32_t a1() const { return a_at(1); }
  /// (a_1 p - 1)/q, the minimal exponent for unit weights.
  std::uint32_t mbar() const { return A[0]; }
};

PrimeConfig make_prime_config(std::uint64_t p, std::uint64_t q, std::uint64_t n);

/// The unique b in [1, q-1] with b*p = a (mod q).
std::uint32_t eta(std::uint32_t a, const PrimeConfig& cfg);

struct PDigits {
  std::vector<std::uint32_t> digits;  // little-endian, no trailing zeros
  std::uint32_t base = 0;

  std::uint64_t value() const;
};

PDigits base_p_digits(std::uint64_t m, std::uint32_t p);

Fp lucas_binom(std::uint64_t nn, std::uint64_t m, std::uint32_t p);

/// binom(-1/q, m) mod p via the periodic digits A_s of -1/q.
Fp binom_neg_inv_q(std::uint64_t m, const PrimeConfig& cfg);

/// Lazily generated p-adic digits of a rational u/v with p not dividing v.
/// The digit sequence is eventually periodic; one period is cached.
class PAdicDigits {
 public:
  PAdicDigits(std::int64_t u, std::int64_t v, std::uint32_t p);
  std::uint32_t digit(std::uint64_t i);
  /// (preperiod, period) once the cycle has been found, else (0, 0).
  std::pair<std::uint64_t, std::uint64_t> cycle() const { return {pre_, period_}; }

 private:
  void extend();

  std::uint32_t p_;
  std::int64_t v_;
  std::int64_t u_cur_;
  std::uint32_t v_inv_;
  std::vector<std::uint32_t> digits_;
  std::vector<std::int64_t> states_;
  std::uint64_t pre_ = 0;
  std::uint64_t period_ = 0;
};

/// binom(u/v, m) mod p as the product of digitwise binomials over the
/// p-adic expansion of u/v. Requires p not dividing v and gcd(u, v) = 1.
Fp binom_rational(std::int64_t u, std::int64_t v, std::uint64_t m, std::uint32_t p);

/// Same value for -v < u < 0 computed from the purely periodic expansion
/// u/v = A/(1 - p^r), where r is the multiplicative order of p mod v.
Fp binom_rational_periodic(std::int64_t u, std::int64_t v, std::uint64_t m, std::uint32_t p);

}  // namespace kzmodp
