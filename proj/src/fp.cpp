#include "kzmodp/fp.hpp"

#include <array>
#include <numeric>

namespace kzmodp {
namespace fp {

Fp pow(Fp base, std::uint64_t e, std::uint32_t p) {
  std::uint64_t result = 1 % p;
  std::uint64_t b = base % p;
  while (e > 0) {
    if (e & 1u) result = result * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<Fp>(result);
}

Fp inv(Fp a, std::uint32_t p) {
  if (a % p == 0) throw std::domain_error("inverse of zero in F_p");
  // Extended Euclid keeps this valid for any modulus coprime to a.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::domain_error("element not invertible");
  return from_int(t, p);
}

namespace {

// C(n, k) mod p for 0 <= k <= n < p.
Fp small_binom(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t num = 1, den = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    num = num * ((n - i) % p) % p;
    den = den * ((i + 1) % p) % p;
  }
  return mul(static_cast<Fp>(num), inv(static_cast<Fp>(den), p), p);
}

}  // namespace

Fp binom(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
  if (k > n) return 0;
  Fp result = 1 % p;
  while (k > 0 || n > 0) {
    std::uint64_t nd = n % p, kd = k % p;
    if (kd > nd) return 0;
    result = mul(result, small_binom(nd, kd, p), p);
    n /= p;
    k /= p;
  }
  return result;
}

}  // namespace fp

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1u) r = mulmod64(r, b, m);
    b = mulmod64(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all n < 2^64.
  constexpr std::array<std::uint64_t, 12> witnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t a : witnesses) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
  if (m < 2) throw std::invalid_argument("multiplicative_order: modulus must be >= 2");
  if (std::gcd(a % m, m) != 1) throw std::invalid_argument("multiplicative_order: not a unit");
  std::uint64_t x = a % m;
  std::uint64_t order = 1;
  while (x != 1) {
    x = mulmod64(x, a % m, m);
    ++order;
  }
  return order;
}

}  // namespace kzmodp
