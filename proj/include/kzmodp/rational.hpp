#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "kzmodp/fp.hpp"

namespace kzmodp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// p-adic valuation of a nonzero integer; throws on zero.
int p_valuation(const BigInt& x, std::uint32_t p);

/// v_p(num) - v_p(den); throws on zero.
int p_valuation(const Rational& x, std::uint32_t p);

/// Image in F_p of a rational with nonnegative valuation; throws
/// std::domain_error when p divides the reduced denominator.
Fp reduce_mod_p(const Rational& x, std::uint32_t p);

Fp reduce_mod_p(const BigInt& x, std::uint32_t p);

}  // namespace kzmodp
