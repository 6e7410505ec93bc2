#include <doctest.h>

#include <random>

#include "kzmodp/poly.hpp"
#include "kzmodp/poly_json.hpp"
#include "kzmodp/ratpoly.hpp"
#include "oracles.hpp"

using namespace kzmodp;

namespace {

const std::vector<std::string> kXYZ = {"x", "y", "z"};

FpPoly var(std::size_t i, std::uint32_t p = 7) { return FpPoly::variable(kXYZ, p, i); }
FpPoly cst(Fp c, std::uint32_t p = 7) { return FpPoly::constant(kXYZ, p, c); }

}  // namespace

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 30; ++it) {
    auto a = oracle::random_poly(rng, kXYZ, 7, 8, 4);
    auto b = oracle::random_poly(rng, kXYZ, 7, 8, 4);
    auto c = oracle::random_poly(rng, kXYZ, 7, 5, 3);
    CHECK(a * b == b * a);
    CHECK(a * b == oracle::product(a, b));
    CHECK((a + b) * c == a * c + b * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a - a == FpPoly(kXYZ, 7));
    CHECK(-a + a == FpPoly(kXYZ, 7));
  }
}

TEST_CASE("zero coefficients never stored") {
  FpPoly f = var(0) + cst(3);
  f.add_term(Monomial{}, 4);
  CHECK(f.size() == 1);
  CHECK(f.coeff(Monomial{}) == 0);
  CHECK(FpPoly(kXYZ, 7).total_degree() == kDegreeOfZero);
}

TEST_CASE("powers and frobenius") {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 10; ++it) {
    auto f = oracle::random_poly(rng, kXYZ, 5, 4, 3);
    CHECK(pow(f, 6) == oracle::power(f, 6));
    // In characteristic p, f^p = f(z^p) for coefficients in F_p.
    CHECK(pow(f, 5) == frobenius(f, 1));
    CHECK(pow(f, 25) == frobenius(f, 2));
  }
  CHECK(pow(var(0), 0) == cst(1));
}

TEST_CASE("truncated multiplication keeps low degrees only") {
  std::mt19937_64 rng(3);
  auto a = oracle::random_poly(rng, kXYZ, 7, 10, 5);
  auto b = oracle::random_poly(rng, kXYZ, 7, 10, 5);
  CHECK(mul_truncated(a, b, 6) == truncate_degree(a * b, 6));
  for (const auto& [m, c] : truncate_degree(a * b, 6).terms()) CHECK(m.degree() <= 6);
}

TEST_CASE("derivatives satisfy the product rule") {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 10; ++it) {
    auto a = oracle::random_poly(rng, kXYZ, 11, 6, 5);
    auto b = oracle::random_poly(rng, kXYZ, 11, 6, 5);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(partial_derivative(a * b, i) == partial_derivative(a, i) * b + a * partial_derivative(b, i));
  }
  // d/dx x^7 vanishes in characteristic 7.
  CHECK(partial_derivative(pow(var(0), 7), "x").is_zero());
}

TEST_CASE("expand in x and reassemble") {
  std::mt19937_64 rng(5);
  auto f = oracle::random_poly(rng, kXYZ, 7, 20, 6);
  auto s = expand_in_x(f, "y");
  CHECK(s.coeffs.size() == s.degree() + 1);
  for (const auto& c : s.coeffs) CHECK_FALSE(c.has_var("y"));
  CHECK(assemble(s, kXYZ) == f);
}

TEST_CASE("substitution is evaluation-compatible") {
  std::mt19937_64 rng(6);
  auto f = oracle::random_poly(rng, kXYZ, 13, 10, 4);
  auto g = oracle::random_poly(rng, kXYZ, 13, 4, 2);
  auto h = substitute(f, {{"x", g}}, kXYZ);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::uint32_t> pt = {static_cast<std::uint32_t>(rng() % 13), static_cast<std::uint32_t>(rng() % 13),
                                     static_cast<std::uint32_t>(rng() % 13)};
    auto inner = pt;
    inner[0] = oracle::evaluate(g, pt);
    CHECK(oracle::evaluate(h, pt) == oracle::evaluate(f, inner));
  }
}

TEST_CASE("variable shifts and maps") {
  // (x - z)^2 after x -> x - z
  auto f = pow(var(0), 2);
  auto g = shift_variables(f, 2, {0});
  CHECK(g == pow(var(0) - var(2), 2));
  auto swapped = map_variables(var(0) * var(1) * var(1), kXYZ, {1, 0, 2});
  CHECK(swapped == var(1) * var(0) * var(0));
}

TEST_CASE("homogeneity and exact division") {
  auto f = var(0) * var(1) + var(2) * var(2);
  CHECK(is_homogeneous(f) == 2);
  CHECK_FALSE(is_homogeneous(f + var(0)).has_value());
  std::mt19937_64 rng(8);
  for (int it = 0; it < 10; ++it) {
    auto a = oracle::random_poly(rng, kXYZ, 7, 6, 3);
    auto b = oracle::random_poly(rng, kXYZ, 7, 4, 3);
    if (b.is_zero()) continue;
    auto q = divide_exact(a * b, b);
    REQUIRE(q.has_value());
    CHECK(*q == a);
  }
  CHECK_FALSE(divide_exact(var(0) + cst(1), var(0)).has_value());
}

TEST_CASE("graded lex order") {
  Monomial a, b;
  a[0] = 1;
  b[1] = 2;
  CHECK(graded_lex_less(a, b));
  Monomial c;
  c[1] = 1;
  CHECK(graded_lex_less(c, a));
  auto t = (var(0) + var(1) * var(1) + cst(2)).sorted_terms();
  REQUIRE(t.size() == 3);
  CHECK(t.front().first.degree() == 2);
  CHECK(t.back().first.degree() == 0);
}

TEST_CASE("json round trip and malformed input") {
  std::mt19937_64 rng(9);
  auto f = oracle::random_poly(rng, kXYZ, 7, 15, 5);
  auto j = to_json(f);
  CHECK(poly_from_json(j) == f);
  CHECK(j.dump() == to_json(poly_from_json(j)).dump());
  CHECK_THROWS_AS(poly_from_json(nlohmann::json::parse(R"({"vars":["x"],"p":7})")), std::invalid_argument);
  CHECK_THROWS_AS(poly_from_json(nlohmann::json::parse(R"({"vars":["x"],"p":7,"terms":[{"exp":[1,2],"coef":1}]})")),
                  std::invalid_argument);
}

TEST_CASE("binomial table matches lucas") {
  BinomialTable t(5, 60);
  for (unsigned r = 0; r <= 60; ++r)
    for (unsigned j = 0; j <= r + 1; ++j) CHECK(t(r, j) == oracle::binom_mod(r, j, 5));
}

TEST_CASE("rational polynomials reduce termwise") {
  RatPoly f(kXYZ);
  Monomial m;
  m[0] = 2;
  f.add_term(m, Rational(3, 2));
  f.add_term(Monomial{}, Rational(10, 3));
  CHECK(f.min_valuation(5) == 0);
  auto g = f.reduce(5);
  CHECK(g.coeff(m) == 4);
  CHECK(g.coeff(Monomial{}) == 0);
  f.add_term(Monomial{}, Rational(1, 5));
  CHECK(f.min_valuation(5) == -1);
  CHECK_THROWS_AS(f.reduce(5), std::domain_error);
}
