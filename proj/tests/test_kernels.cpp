#include <doctest.h>

#include <random>

#include "kzmodp/cartier.hpp"
#include "kzmodp/kernels.hpp"
#include "kzmodp/kz.hpp"
#include "oracles.hpp"

using namespace kzmodp;

TEST_CASE("serial and parallel products agree") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> vars = {"a", "b", "c", "d"};
  for (int it = 0; it < 8; ++it) {
    auto f = oracle::random_poly(rng, vars, 13, 60, 6);
    auto g = oracle::random_poly(rng, vars, 13, 60, 6);
    auto s = mul_serial(f, g);
    CHECK(s == mul_parallel(f, g));
    CHECK(s == oracle::product(f, g));
    CHECK(mul_serial(f, g, 9) == mul_parallel(f, g, 9));
  }
}

TEST_CASE("linear product coefficient against full expansion") {
  // x^2 (x - z1)^3 (x - z2)^4 (x - 3)^2 over F_7
  const std::vector<std::string> vars = {"z1", "z2"};
  const std::vector<std::string> xv = {"x", "z1", "z2"};
  const std::uint32_t p = 7;
  auto x = FpPoly::variable(xv, p, 0);
  auto full = pow(x, 2) * pow(x - FpPoly::variable(xv, p, 1), 3) * pow(x - FpPoly::variable(xv, p, 2), 4) *
              pow(x - FpPoly::constant(xv, p, 3), 2);
  auto series = expand_in_x(full, "x");
  std::vector<LinearFactor> factors = {LinearFactor::of_var(0, 3), LinearFactor::of_var(1, 4),
                                       LinearFactor::of_const(3, 2)};
  for (std::uint64_t w = 0; w <= series.degree() + 1; ++w) {
    FpPoly expected = w <= series.degree() ? series.coeffs[w] : FpPoly(vars, p);
    auto s = linear_product_coefficient(factors, 2, w, vars, p, Exec::Serial);
    CHECK(s == expected);
    CHECK(s == linear_product_coefficient(factors, 2, w, vars, p, Exec::Parallel));
  }
}

TEST_CASE("thread count does not change results") {
  auto cfg = make_prime_config(11, 3, 7);
  const int before = num_threads();
  set_num_threads(1);
  auto one = cartier_block(1, curve_X(cfg), cfg, Exec::Parallel);
  set_num_threads(4);
  auto four = cartier_block(1, curve_X(cfg), cfg, Exec::Parallel);
  auto serial = cartier_block(1, curve_X(cfg), cfg, Exec::Serial);
  set_num_threads(before);
  CHECK(one.entries == four.entries);
  CHECK(one.entries == serial.entries);
}

TEST_CASE("arithmetic vectors: serial equals parallel") {
  for (auto [p, q, n] : std::vector<std::tuple<int, int, int>>{{5, 3, 4}, {7, 5, 6}, {13, 3, 7}}) {
    auto cfg = make_prime_config(p, q, n);
    auto M = minimal_exponents(unit_weights(cfg), cfg).minimal;
    for (std::uint64_t l = 1; l * cfg.p - 1 < M.sum(); ++l)
      CHECK(arithmetic_vector(M, l * cfg.p - 1, cfg.p, Exec::Serial) ==
            arithmetic_vector(M, l * cfg.p - 1, cfg.p, Exec::Parallel));
  }
}
