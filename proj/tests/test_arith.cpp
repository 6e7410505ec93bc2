#include <doctest.h>

#include <numeric>
#include <random>

#include "kzmodp/arith.hpp"
#include "kzmodp/rational.hpp"
#include "oracles.hpp"

using namespace kzmodp;

TEST_CASE("field operations agree with integer arithmetic") {
  for (std::uint32_t p : {2u, 3u, 5u, 13u, 2147483629u}) {
    std::mt19937_64 rng(p);
    for (int i = 0; i < 200; ++i) {
      Fp a = rng() % p, b = rng() % p;
      CHECK(fp::add(a, b, p) == (static_cast<std::uint64_t>(a) + b) % p);
      CHECK(fp::sub(a, b, p) == (static_cast<std::uint64_t>(a) + p - b) % p);
      CHECK(fp::mul(a, b, p) == static_cast<std::uint64_t>(a) * b % p);
      CHECK(fp::add(a, fp::neg(a, p), p) == 0);
      if (a != 0) CHECK(fp::mul(a, fp::inv(a, p), p) == 1);
    }
  }
  CHECK(fp::from_int(-7, 5) == 3);
  CHECK(fp::sign(3, 7) == 6);
  CHECK_THROWS_AS(fp::inv(0, 7), std::domain_error);
}

TEST_CASE("fermat and inverse oracle") {
  for (std::uint32_t p : {5u, 7u, 11u, 13u})
    for (Fp a = 1; a < p; ++a) {
      CHECK(fp::pow(a, p - 1, p) == 1);
      CHECK(fp::inv(a, p) == oracle::inverse(a, p));
    }
}

TEST_CASE("primality and multiplicative order") {
  for (std::uint64_t n = 0; n < 2000; ++n) CHECK(is_prime(n) == oracle::is_prime(n));
  CHECK(is_prime(2305843009213693951ull));
  CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
  for (std::uint64_t m = 2; m < 60; ++m)
    for (std::uint64_t a = 1; a < m; ++a)
      if (std::gcd(a, m) == 1) CHECK(multiplicative_order(a, m) == oracle::order(a, m));
}

TEST_CASE("prime configuration at (5,3,4)") {
  auto c = make_prime_config(5, 3, 4);
  CHECK(c.k == 1);
  CHECK(c.d == 2);
  CHECK(c.a == std::vector<std::uint32_t>{1, 2, 1});
  CHECK(c.A == std::vector<std::uint32_t>{3, 1});
  CHECK(c.a1() == 2);
  CHECK(c.mbar() == 3);
  CHECK(eta(1, c) == 2);
  CHECK(eta(2, c) == 1);
}

TEST_CASE("configuration invariants") {
  for (auto [p, q, n] : std::vector<std::tuple<int, int, int>>{{7, 3, 4}, {7, 5, 6}, {11, 3, 7}, {13, 3, 7}, {31, 7, 29}}) {
    auto c = make_prime_config(p, q, n);
    CHECK(c.d == oracle::order(p, q));
    CHECK(c.a.front() == 1);
    CHECK(c.a.back() == 1);
    for (std::uint32_t s = 0; s < c.d; ++s) {
      CHECK(c.a[s + 1] * static_cast<std::uint64_t>(p) % q == c.a[s] % q);
      CHECK(static_cast<std::uint64_t>(c.A[s]) * q == static_cast<std::uint64_t>(c.a[s + 1]) * p - c.a[s]);
      CHECK(c.A[s] < static_cast<std::uint32_t>(p));
    }
    for (std::uint32_t a = 1; a < c.q; ++a) CHECK(eta(a, c) * static_cast<std::uint64_t>(p) % q == a);
  }
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(make_prime_config(6, 3, 4), ConfigError);
  CHECK_THROWS_AS(make_prime_config(5, 4, 5), ConfigError);
  CHECK_THROWS_AS(make_prime_config(3, 5, 6), ConfigError);
  CHECK_THROWS_AS(make_prime_config(5, 3, 5), ConfigError);
  CHECK_THROWS_AS(make_prime_config(5, 3, 7), ConfigError);
}

TEST_CASE("base-p digits round trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::uint64_t m = rng() >> (rng() % 60);
    std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13}[rng() % 6];
    auto d = base_p_digits(m, p);
    CHECK(d.value() == m);
    if (!d.digits.empty()) CHECK(d.digits.back() != 0);
    for (auto x : d.digits) CHECK(x < p);
  }
}

TEST_CASE("lucas binomials against factorials") {
  for (std::uint32_t p : {5u, 7u})
    for (unsigned n = 0; n <= 120; ++n)
      for (unsigned m = 0; m <= n + 2; ++m) CHECK(lucas_binom(n, m, p) == oracle::binom_mod(n, m, p));
}

TEST_CASE("binom(-1/q, m) against the exact rational") {
  for (auto [p, q] : std::vector<std::pair<int, int>>{{5, 3}, {7, 3}, {7, 5}, {11, 3}, {13, 7}}) {
    auto c = make_prime_config(p, q, q + 1);
    for (std::uint64_t m = 0; m <= 150; ++m) {
      Rational exact = oracle::binom(Rational(-1, q), m);
      CHECK(p_valuation(exact == 0 ? Rational(1) : exact, p) >= 0);
      CHECK(binom_neg_inv_q(m, c) == reduce_mod_p(exact, p));
    }
  }
}

TEST_CASE("p-adic digits reproduce u/v modulo p^N") {
  for (auto [u, v, p] : std::vector<std::tuple<int, int, int>>{{-1, 3, 5}, {2, 7, 5}, {-5, 11, 13}, {17, 9, 7}, {-1, 1, 3}}) {
    PAdicDigits dig(u, v, p);
    BigInt s = 0, pw = 1;
    const int N = 40;
    for (int i = 0; i < N; ++i, pw *= p) s += BigInt(dig.digit(i)) * pw;
    BigInt diff = BigInt(v) * s - u;
    CHECK(diff % pw == 0);
    auto [pre, period] = dig.cycle();
    if (period > 0)
      for (std::uint64_t i = pre; i < pre + 30; ++i) CHECK(dig.digit(i) == dig.digit(i + period));
  }
}

TEST_CASE("rational binomials: digit product against exact values") {
  std::mt19937_64 rng(99);
  int done = 0;
  while (done < 200) {
    std::uint32_t p = std::vector<std::uint32_t>{3, 5, 7, 11}[rng() % 4];
    std::int64_t v = 1 + rng() % 30;
    std::int64_t u = static_cast<std::int64_t>(rng() % 81) - 40;
    if (v % p == 0 || std::gcd(u, v) != 1) continue;
    std::uint64_t m = rng() % 200;
    ++done;
    CHECK(binom_rational(u, v, m, p) == reduce_mod_p(oracle::binom(Rational(u, v), m), p));
    if (u < 0 && -u < v) CHECK(binom_rational_periodic(u, v, m, p) == binom_rational(u, v, m, p));
  }
}

TEST_CASE("valuations and reduction") {
  CHECK(p_valuation(BigInt(250), 5) == 3);
  CHECK(p_valuation(Rational(3, 25), 5) == -2);
  CHECK(reduce_mod_p(Rational(1, 3), 5) == 2);
  CHECK(reduce_mod_p(Rational(-7, 2), 5) == 4);
  CHECK_THROWS_AS(reduce_mod_p(Rational(1, 5), 5), std::domain_error);
  CHECK_THROWS(p_valuation(BigInt(0), 5));
}
