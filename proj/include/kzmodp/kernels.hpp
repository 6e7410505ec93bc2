#pragma once

// Hot loops in two flavours: a serial reference and an OpenMP version.
// Both produce identical polynomials; only the accumulation order differs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kzmodp/poly.hpp"

namespace kzmodp {

enum class Exec { Serial, Parallel };

void set_num_threads(int n);
int num_threads();

FpPoly mul_serial(const FpPoly& a, const FpPoly& b, std::optional<std::uint64_t> max_degree = std::nullopt);
FpPoly mul_parallel(const FpPoly& a, const FpPoly& b, std::optional<std::uint64_t> max_degree = std::nullopt);
FpPoly mul(const FpPoly& a, const FpPoly& b, Exec exec, std::optional<std::uint64_t> max_degree = std::nullopt);

/// A factor (x - r)^mult with r either a variable of the output ring or a constant.
struct LinearFactor {
  std::optional<std::size_t> var;
  Fp root = 0;
  std::uint64_t mult = 0;

  static LinearFactor of_var(std::size_t v, std::uint64_t m) { return {v, 0, m}; }
  static LinearFactor of_const(Fp c, std::uint64_t m) { return {std::nullopt, c, m}; }
};

/// Coefficient of x^w in x^shift * prod (x - r_i)^{mult_i}, as a polynomial
/// over `vars`. Enumerates the exponent tuples directly instead of expanding
/// the product.
FpPoly linear_product_coefficient(const std::vector<LinearFactor>& factors, std::uint64_t shift, std::uint64_t w,
                                  const std::vector<std::string>& vars, std::uint32_t p, Exec exec);

/// Number of terms that would be visited (no Lucas pruning), for sizing work.
std::uint64_t linear_product_work(const std::vector<LinearFactor>& factors, std::uint64_t shift, std::uint64_t w);

}  // namespace kzmodp
