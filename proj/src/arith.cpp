#include "kzmodp/arith.hpp"
#include "kzmodp/rational.hpp"

#include <algorithm>
#include <numeric>

namespace kzmodp {

PrimeConfig make_prime_config(std::uint64_t p, std::uint64_t q, std::uint64_t n) {
  if (!is_prime(p)) throw ConfigError("p not prime");
  if (!is_prime(q)) throw ConfigError("q not prime");
  if (p >= kMaxModulus) throw ConfigError("p too large (must be < 2^31)");
  if (p <= q) throw ConfigError("p must exceed q");
  if (n == 0 || n % q != 1) throw ConfigError("n ≢ 1 mod q");
  if (p <= n) throw ConfigError("p must exceed n");

  PrimeConfig cfg;
  cfg.p = static_cast<std::uint32_t>(p);
  cfg.q = static_cast<std::uint32_t>(q);
  cfg.n = static_cast<std::uint32_t>(n);
  cfg.k = static_cast<std::uint32_t>((n - 1) / q);
  cfg.d = static_cast<std::uint32_t>(multiplicative_order(p % q, q));
  cfg.a.push_back(1);
  for (std::uint32_t s = 0; s < cfg.d; ++s) {
    std::uint32_t cur = cfg.a.back();
    std::uint32_t next = 0;
    for (std::uint32_t b = 1; b < q; ++b) {
      if ((static_cast<std::uint64_t>(b) * p) % q == cur % q) {
        next = b;
        break;
      }
    }
    cfg.a.push_back(next);
    cfg.A.push_back(static_cast<std::uint32_t>((static_cast<std::uint64_t>(next) * p - cur) / q));
  }
  return cfg;
}

std::uint32_t eta(std::uint32_t a, const PrimeConfig& cfg) {
  if (a < 1 || a >= cfg.q) throw std::out_of_range("eta: argument outside [1, q-1]");
  std::uint32_t pinv = fp::inv(cfg.p % cfg.q, cfg.q);
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * pinv % cfg.q);
}

std::uint64_t PDigits::value() const {
  std::uint64_t v = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = v * base + *it;
  return v;
}

PDigits base_p_digits(std::uint64_t m, std::uint32_t p) {
  PDigits out;
  out.base = p;
  while (m > 0) {
    out.digits.push_back(static_cast<std::uint32_t>(m % p));
    m /= p;
  }
  return out;
}

Fp lucas_binom(std::uint64_t nn, std::uint64_t m, std::uint32_t p) { return fp::binom(nn, m, p); }

Fp binom_neg_inv_q(std::uint64_t m, const PrimeConfig& cfg) {
  Fp result = 1;
  for (std::uint64_t i = 0; m > 0; ++i, m /= cfg.p) {
    std::uint32_t digit = static_cast<std::uint32_t>(m % cfg.p);
    std::uint32_t top = cfg.A_at(i);
    if (digit > top) return 0;
    result = fp::mul(result, fp::binom(top, digit, cfg.p), cfg.p);
  }
  return result;
}

PAdicDigits::PAdicDigits(std::int64_t u, std::int64_t v, std::uint32_t p) : p_(p), v_(v), u_cur_(u) {
  if (v == 0) throw std::invalid_argument("binom_rational: zero denominator");
  if (v % static_cast<std::int64_t>(p) == 0) throw std::invalid_argument("binom_rational: p divides v");
  if (std::gcd(u, v) != 1) throw std::invalid_argument("binom_rational: gcd(u, v) != 1");
  if (v_ < 0) {
    v_ = -v_;
    u_cur_ = -u_cur_;
  }
  v_inv_ = fp::inv(fp::from_int(v_, p_), p_);
}

// Digit step: A = u/v mod p, then u <- (u - A v)/p. The state u stays bounded
// by max(|u0|, v), so it eventually repeats.
void PAdicDigits::extend() {
  states_.push_back(u_cur_);
  std::uint32_t A = fp::mul(fp::from_int(u_cur_, p_), v_inv_, p_);
  digits_.push_back(A);
  u_cur_ = (u_cur_ - static_cast<std::int64_t>(A) * v_) / static_cast<std::int64_t>(p_);
  if (period_ == 0) {
    auto it = std::find(states_.begin(), states_.end(), u_cur_);
    if (it != states_.end()) {
      pre_ = static_cast<std::uint64_t>(it - states_.begin());
      period_ = states_.size() - pre_;
    }
  }
}

std::uint32_t PAdicDigits::digit(std::uint64_t i) {
  if (period_ != 0 && i >= digits_.size()) return digits_[pre_ + (i - pre_) % period_];
  while (i >= digits_.size()) {
    extend();
    if (period_ != 0 && i >= digits_.size()) return digits_[pre_ + (i - pre_) % period_];
  }
  return digits_[i];
}

Fp binom_rational(std::int64_t u, std::int64_t v, std::uint64_t m, std::uint32_t p) {
  PAdicDigits ds(u, v, p);
  Fp result = 1;
  for (std::uint64_t i = 0; m > 0; ++i, m /= p) {
    std::uint32_t digit = static_cast<std::uint32_t>(m % p);
    std::uint32_t top = ds.digit(i);
    if (digit > top) return 0;
    result = fp::mul(result, fp::binom(top, digit, p), p);
  }
  return result;
}

Fp binom_rational_periodic(std::int64_t u, std::int64_t v, std::uint64_t m, std::uint32_t p) {
  if (v <= 1 || u >= 0 || -u >= v) throw std::invalid_argument("binom_rational_periodic: need -v < u < 0 < v");
  if (std::gcd(u, v) != 1) throw std::invalid_argument("binom_rational_periodic: gcd(u, v) != 1");
  std::uint64_t r = multiplicative_order(p % v, v);
  // u/v = -A/(p^r - 1) with A = -u (p^r - 1)/v, 0 < A < p^r - 1; the digits of
  // A (padded to r) repeat forever.
  BigInt pr = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(r));
  BigInt big = BigInt(-u) * ((pr - 1) / v);
  std::vector<std::uint32_t> block(r, 0);
  for (std::uint64_t i = 0; i < r; ++i, big /= p) block[i] = static_cast<std::uint32_t>(big % p);
  Fp result = 1;
  for (std::uint64_t i = 0; m > 0; ++i, m /= p) {
    std::uint32_t digit = static_cast<std::uint32_t>(m % p);
    std::uint32_t top = block[i % r];
    if (digit > top) return 0;
    result = fp::mul(result, fp::binom(top, digit, p), p);
  }
  return result;
}

}  // namespace kzmodp
