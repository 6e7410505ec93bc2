#include <doctest.h>

#include "kzmodp/cartier.hpp"
#include "oracles.hpp"

using namespace kzmodp;

namespace {

FpPoly lam(const std::vector<std::tuple<unsigned, unsigned, std::int64_t>>& terms) {
  FpPoly f(lambda_vars(4), 5);
  for (const auto& [a, b, c] : terms) {
    Monomial m;
    m[0] = a;
    m[1] = b;
    f.add_term(m, fp::from_int(c, 5));
  }
  return f;
}

}  // namespace

TEST_CASE("Hasse-Witt entries of the Legendre-type curve at (5,3,4)") {
  auto cfg = make_prime_config(5, 3, 4);
  HasseWittMatrix hw(curve_Y(cfg), cfg);
  const auto& b1 = hw.block(1);
  const auto& b2 = hw.block(2);
  CHECK(b1.rows == 1);
  CHECK(b1.cols == 2);
  CHECK(b2.rows == 2);
  CHECK(b2.cols == 1);
  CHECK(b1.entries[0][0] == lam({{3, 0, -1}, {0, 3, -1}, {2, 1, -9}, {1, 2, -9}, {2, 0, -9}, {0, 2, -9}, {1, 0, -9},
                                 {0, 1, -9}, {1, 1, -27}, {0, 0, -1}}));
  CHECK(b1.entries[0][1] == lam({{3, 3, 3}, {3, 2, 3}, {2, 3, 3}}));
  CHECK(b2.entries[0][0] == lam({{1, 0, -1}, {0, 1, -1}, {0, 0, -1}}));
  CHECK(b2.entries[1][0] == lam({{0, 0, 1}}));
  auto full = hw.full();
  REQUIRE(full.size() == 3);
  CHECK(full[0][0].is_zero());
  CHECK(full[1][1].is_zero());
  CHECK(full[0][1] == b1.entries[0][0]);
}

TEST_CASE("three extraction routes agree on every entry") {
  for (auto [p, q, n] : std::vector<std::tuple<int, int, int>>{{5, 3, 4}, {7, 3, 4}, {7, 5, 6}}) {
    auto cfg = make_prime_config(p, q, n);
    for (auto curve : {curve_Y(cfg), curve_X(cfg)}) {
      for (std::uint32_t a = 1; a < cfg.q; ++a) {
        auto blk = cartier_block(a, curve, cfg, Exec::Serial);
        CHECK(blk.eta_a == eta(a, cfg));
        for (std::uint64_t f = 1; f <= blk.rows; ++f)
          for (std::uint64_t h = 1; h <= blk.cols; ++h) {
            CHECK(blk.entries[f - 1][h - 1] == cartier_entry_by_power(a, f, h, curve, cfg));
            if (curve.type == CurveType::Y) CHECK(blk.entries[f - 1][h - 1] == hw_closed_form(a, f, h, cfg));
          }
      }
    }
  }
}

TEST_CASE("X-curve entries are homogeneous of the predicted degree") {
  auto cfg = make_prime_config(7, 5, 6);
  HasseWittMatrix hw(curve_X(cfg), cfg);
  for (std::uint32_t a = 1; a < cfg.q; ++a) {
    const auto& blk = hw.block(a);
    for (std::uint64_t f = 1; f <= blk.rows; ++f)
      for (std::uint64_t h = 1; h <= blk.cols; ++h) {
        const auto& e = blk.entries[f - 1][h - 1];
        if (!e.is_zero()) CHECK(is_homogeneous(e) == hw_entry_degree(a, f, h, cfg));
      }
  }
}

TEST_CASE("genus of y^q = prod (x - z_i)") {
  for (auto [p, q, n] : std::vector<std::tuple<int, int, int>>{{5, 3, 4}, {11, 3, 7}, {7, 5, 6}, {13, 3, 10}}) {
    auto cfg = make_prime_config(p, q, n);
    HasseWittMatrix hw(curve_X(cfg), cfg);
    CHECK(hw.genus() == static_cast<std::size_t>((q - 1) * (n - 1) / 2));
  }
}

TEST_CASE("vanishing orders") {
  auto v = e_vanishing({2, 1, 1}, 2, 3);
  CHECK(v.e == std::vector<std::uint32_t>{1, 0, 0});
  CHECK(v.total == 1);
  for (std::uint32_t q : {3u, 5u, 7u})
    for (std::uint32_t w = 1; w < q; ++w)
      for (std::uint32_t a = 1; a < q; ++a) CHECK(e_vanishing({w}, a, q).e[0] == w * a / q);
}

TEST_CASE("parallel block computation matches the cache") {
  auto cfg = make_prime_config(7, 5, 6);
  auto curve = curve_X(cfg);
  auto blocks = hasse_witt_blocks(curve, cfg);
  HasseWittMatrix hw(curve, cfg, Exec::Serial);
  REQUIRE(blocks.size() == cfg.q - 1);
  for (std::uint32_t a = 1; a < cfg.q; ++a) CHECK(blocks[a - 1].entries == hw.block(a).entries);
}

TEST_CASE("cartier hat rows are the I basis") {
  for (auto [p, q, n] : std::vector<std::tuple<int, int, int>>{{5, 3, 4}, {7, 5, 6}}) {
    auto cfg = make_prime_config(p, q, n);
    auto hat = cartier_hat(curve_X(cfg), cfg);
    auto I = basis_I(cfg);
    REQUIRE(hat.rows.size() == I.members.size());
    for (std::size_t r = 0; r < hat.rows.size(); ++r) {
      CHECK(hat.rows[r].m == I.members[r].m);
      CHECK(hat.rows[r].x_power == cfg.a1() * cfg.k - hat.rows[r].m);
      CHECK(hat.rows[r].vec == I.members[r].vec);
    }
    CHECK(check_regularity(hat, cfg).pass);
  }
}

TEST_CASE("regularity of the fused curve and detection of a broken row") {
  auto cfg = make_prime_config(5, 3, 4);
  auto hat = cartier_hat(curve_XTilde(cfg, {2, 1, 1}), cfg);
  auto rep = check_regularity(hat, cfg);
  CHECK(rep.pass);
  CHECK(rep.required == std::vector<std::uint32_t>{1, 0, 0});
  auto broken = hat;
  broken.rows[0].vec[0] += FpPoly::constant(broken.rows[0].vec[0].vars(), 5, 1);
  CHECK_FALSE(check_regularity(broken, cfg).pass);
  CHECK_THROWS_AS(curve_XTilde(cfg, {2, 1}), ConfigError);
}

TEST_CASE("iterated solutions") {
  auto cfg = make_prime_config(5, 3, 4);
  auto I = basis_I(cfg);
  HasseWittMatrix hw(curve_X(cfg), cfg);
  for (unsigned b = 1; b <= 2; ++b)
    for (std::uint64_t m = 1; m <= static_cast<std::uint64_t>(cfg.a_at(b + 1)) * cfg.k; ++m) {
      auto it = iterated_solution(b, m, cfg, hw, I);
      REQUIRE(it.coeffs.size() == I.members.size());
      auto expanded = verify_iterated(it, UINT64_MAX);
      auto structural = verify_iterated(it, 0);
      CHECK(expanded.pass);
      CHECK(expanded.expanded);
      CHECK(structural.pass);
      CHECK(structural.method == "linearity");
      CHECK(expanded.coefficients_in_frobenius_image);
      for (const auto& c : it.coeffs)
        for (const auto& [mono, v] : c.terms())
          for (std::size_t i = 0; i < cfg.n; ++i) CHECK(mono[i] % cfg.p == 0);
      auto vec = it.expand(Exec::Serial);
      CHECK(vec == it.expand(Exec::Parallel));
      for (std::size_t j = 0; j < cfg.n; ++j) CHECK(it.coordinate(j) == vec[j]);
    }
  CHECK_THROWS(iterated_solution(1, 99, cfg, hw, I));
}

TEST_CASE("b = 1 iterated solution is the Frobenius-twisted block row") {
  auto cfg = make_prime_config(7, 5, 6);
  auto I = basis_I(cfg);
  HasseWittMatrix hw(curve_X(cfg), cfg);
  const auto& blk = hw.block(cfg.a1());
  for (std::uint64_t m = 1; m <= static_cast<std::uint64_t>(cfg.a_at(2)) * cfg.k; ++m) {
    auto it = iterated_solution(1, m, cfg, hw, I);
    for (std::size_t m1 = 1; m1 <= it.coeffs.size(); ++m1) CHECK(it.coeffs[m1 - 1] == frobenius(blk.entries[m1 - 1][m - 1], 1));
  }
}
