#include <doctest.h>

#include <random>

#include "kzmodp/kz.hpp"
#include "oracles.hpp"

using namespace kzmodp;

namespace {

// Direct residuals of q (z_i - z_c) d_i s_c - w_i (s_i - s_c) and sum w_j s_j,
// built with ordinary polynomial arithmetic.
bool kz_oracle(const PolyVector& s, const Weights& w, const PrimeConfig& cfg) {
  const std::size_t n = s.size();
  const auto& vars = s.front().vars();
  const std::uint32_t p = cfg.p;
  FpPoly sum(vars, p);
  for (std::size_t j = 0; j < n; ++j) sum += (w[j] % p) * s[j];
  if (!sum.is_zero()) return false;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      auto zi = FpPoly::variable(vars, p, i), zc = FpPoly::variable(vars, p, c);
      auto lhs = (cfg.q % p) * oracle::product(zi - zc, partial_derivative(s[c], i));
      auto rhs = (w[i] % p) * (s[i] - s[c]);
      if (lhs != rhs) return false;
    }
  return true;
}

bool all_zero(const PolyVector& v) {
  return std::all_of(v.begin(), v.end(), [](const FpPoly& f) { return f.is_zero(); });
}

const std::vector<std::tuple<int, int, int>> kSmall = {{5, 3, 4}, {7, 3, 4}, {7, 5, 6}, {13, 3, 7}};

}  // namespace

TEST_CASE("minimal exponents solve q M = -w mod p") {
  for (auto [p, q, n] : kSmall) {
    auto cfg = make_prime_config(p, q, n);
    auto w = unit_weights(cfg);
    auto me = minimal_exponents(w, cfg);
    for (std::size_t j = 0; j < w.size(); ++j) {
      CHECK((static_cast<std::uint64_t>(q) * me.minimal.M[j] + w[j]) % p == 0);
      CHECK(me.minimal.M[j] < static_cast<std::uint64_t>(p));
      CHECK(me.canonical.M[j] == w[j] * cfg.mbar());
    }
  }
  auto cfg = make_prime_config(5, 3, 4);
  CHECK_THROWS_AS(validate_weights({1, 1, 3, 1}, cfg), ConfigError);
  CHECK_THROWS_AS(validate_weights({0, 1, 1, 1}, cfg), ConfigError);
}

TEST_CASE("master polynomial against the naive product") {
  auto cfg = make_prime_config(5, 3, 4);
  auto M = minimal_exponents(unit_weights(cfg), cfg).minimal;
  auto P = master_polynomial(M, cfg);
  const auto& vars = P.vars();
  FpPoly expected = FpPoly::constant(vars, 5, 1);
  for (std::size_t i = 0; i < 4; ++i)
    expected = oracle::product(expected, oracle::power(FpPoly::variable(vars, 5, 0) - FpPoly::variable(vars, 5, i + 1), M.M[i]));
  CHECK(P == expected);
}

TEST_CASE("I basis solves KZ, both verification modes and the direct oracle") {
  for (auto [p, q, n] : kSmall) {
    auto cfg = make_prime_config(p, q, n);
    auto w = unit_weights(cfg);
    auto I = basis_I(cfg);
    CHECK(I.members.size() == static_cast<std::size_t>(cfg.a1()) * cfg.k);
    for (const auto& s : I.members) {
      CHECK_FALSE(all_zero(s.vec));
      CHECK(verify_kz(s.vec, w, cfg).pass);
      CHECK(verify_kz(s.vec, w, cfg, KzMode::Cleared).pass);
      if (p <= 7) CHECK(kz_oracle(s.vec, w, cfg));
      auto lazy = verify_kz_lazy(s.vec.size(), [&](std::size_t j) { return s.vec[j]; }, w, cfg);
      CHECK(lazy.pass);
      CHECK(s.degree == s.vec.front().total_degree());
    }
  }
}

TEST_CASE("corrupted solutions are rejected") {
  auto cfg = make_prime_config(7, 5, 6);
  auto w = unit_weights(cfg);
  auto I = basis_I(cfg);
  std::mt19937_64 rng(3);
  for (const auto& s : I.members) {
    for (int t = 0; t < 5; ++t) {
      PolyVector bad = s.vec;
      std::size_t j = rng() % bad.size();
      Monomial m;
      m[rng() % bad.size()] = 1 + rng() % 3;
      bad[j].add_term(m, 1 + rng() % 6);
      auto r = verify_kz(bad, w, cfg);
      CHECK_FALSE(r.pass);
      CHECK(r.fail_i.has_value());
      CHECK_FALSE(verify_kz(bad, w, cfg, KzMode::Cleared).pass);
      CHECK_FALSE(kz_oracle(bad, w, cfg));
    }
  }
  CHECK_THROWS_AS(verify_kz(I.members[0].vec, {1, 1, 1}, cfg), std::invalid_argument);
}

TEST_CASE("F_p[z^p]-linear combinations stay solutions") {
  auto cfg = make_prime_config(5, 3, 4);
  auto w = unit_weights(cfg);
  auto I = basis_I(cfg);
  std::mt19937_64 rng(5);
  const auto vars = z_vars(4);
  for (int t = 0; t < 4; ++t) {
    PolyVector acc(4, FpPoly(vars, 5));
    for (const auto& s : I.members) {
      auto c = frobenius(oracle::random_poly(rng, vars, 5, 3, 1), 1);
      for (std::size_t j = 0; j < 4; ++j) acc[j] += c * s.vec[j];
    }
    CHECK(verify_kz(acc, w, cfg).pass);
    CHECK(kz_oracle(acc, w, cfg));
    // A coefficient outside F_p[z^p] breaks the differential equations.
    PolyVector off = acc;
    for (std::size_t j = 0; j < 4; ++j) off[j] += FpPoly::variable(vars, 5, 0) * I.members[0].vec[j];
    CHECK_FALSE(verify_kz(off, w, cfg).pass);
  }
}

TEST_CASE("rank law and independence") {
  for (auto [p, q, n] : kSmall) {
    auto cfg = make_prime_config(p, q, n);
    auto I = basis_I(cfg);
    std::vector<PolyVector> members;
    for (const auto& s : I.members) members.push_back(s.vec);
    auto cert = independence_certificate(members, cfg.p);
    CHECK(cert.pass);
    CHECK(cert.disjoint_supports);
    CHECK(module_rank(unit_weights(cfg), cfg) == static_cast<std::uint64_t>(cfg.a1()) * cfg.k);
    CHECK(module_span_rank(members, cfg.p) == members.size());
    // A repeated member does not raise the rank.
    members.push_back(members.front());
    CHECK(module_span_rank(members, cfg.p) == members.size() - 1);
  }
}

TEST_CASE("J routes agree and J is homogeneous of the stated degree") {
  for (auto [p, q, n] : kSmall) {
    auto cfg = make_prime_config(p, q, n);
    auto JA = basis_J(cfg, Route::A);
    auto JB = basis_J(cfg, Route::B);
    auto JI = basis_J_from_I(basis_I(cfg));
    REQUIRE(JA.members.size() == JB.members.size());
    REQUIRE(JA.members.size() == JI.members.size());
    for (std::size_t i = 0; i < JA.members.size(); ++i) {
      CHECK(JA.members[i].vec == JB.members[i].vec);
      CHECK(JA.members[i].vec == JI.members[i].vec);
      for (const auto& f : JA.members[i].vec)
        if (!f.is_zero()) CHECK(is_homogeneous(f) == j_degree(cfg, JA.members[i].m));
      CHECK(verify_kz(JA.members[i].vec, unit_weights(cfg), cfg).pass);
    }
  }
  auto cfg = make_prime_config(5, 3, 4);
  CHECK(j_degree(cfg, 1) == 2);
  CHECK(j_degree(cfg, 2) == 7);
}

TEST_CASE("K routes agree and homogenize to J") {
  for (auto [p, q, n] : kSmall) {
    auto cfg = make_prime_config(p, q, n);
    auto KA = basis_K(cfg, Route::A);
    auto KB = basis_K(cfg, Route::B);
    auto J = basis_J(cfg, Route::A);
    REQUIRE(KA.members.size() == KB.members.size());
    REQUIRE(KA.members.size() == J.members.size());
    for (std::size_t i = 0; i < KA.members.size(); ++i) {
      CHECK(KA.members[i].vec == KB.members[i].vec);
      CHECK(homogenize(KA.members[i].vec, z_vars(cfg.n), j_degree(cfg, J.members[i].m)) == J.members[i].vec);
    }
  }
}

TEST_CASE("J expressed in the I basis with Frobenius-image coefficients") {
  auto cfg = make_prime_config(7, 5, 6);
  auto I = basis_I(cfg);
  auto J = basis_J(cfg, Route::A);
  for (const auto& s : J.members) {
    auto c = express_in_basis(s.vec, I);
    REQUIRE(c.has_value());
    PolyVector back(s.vec.size(), FpPoly(z_vars(cfg.n), cfg.p));
    for (std::size_t l = 0; l < c->size(); ++l) {
      for (const auto& [m, v] : (*c)[l].terms())
        for (std::size_t i = 0; i < cfg.n; ++i) CHECK(m[i] % cfg.p == 0);
      for (std::size_t j = 0; j < back.size(); ++j) back[j] += (*c)[l] * I.members[l].vec[j];
    }
    CHECK(back == s.vec);
  }
  PolyVector junk(cfg.n, FpPoly::variable(z_vars(cfg.n), cfg.p, 0));
  CHECK_FALSE(express_in_basis(junk, I).has_value());
}

TEST_CASE("embedding matrices are unit lower triangular and compose") {
  auto cfg = make_prime_config(5, 3, 4);
  auto M = minimal_exponents(unit_weights(cfg), cfg).minimal;
  auto shifted = [&](std::vector<std::uint64_t> N) {
    ExponentVectorM r = M;
    r.minimal = false;
    for (std::size_t j = 0; j < N.size(); ++j) r.M[j] += N[j] * cfg.p;
    return r;
  };
  auto M1 = shifted({1, 0, 0, 0});
  auto M2 = shifted({1, 1, 0, 1});
  CHECK(verify_embedding(M1, M, cfg).pass());
  CHECK(verify_embedding(M2, M, cfg).pass());
  CHECK(verify_embedding(M2, M1, cfg).pass());
  auto direct = embedding_matrix(M2, M, cfg);
  auto composed = compose(embedding_matrix(M2, M1, cfg), embedding_matrix(M1, M, cfg));
  CHECK(direct.row_l == composed.row_l);
  CHECK(direct.entries == composed.entries);
  ExponentVectorM bad = M;
  bad.M[0] += 1;
  CHECK_THROWS_AS(embedding_matrix(bad, M, cfg), ConfigError);
}

TEST_CASE("fusion produces solutions for the fused weights") {
  auto cfg = make_prime_config(5, 3, 4);
  auto I = basis_I(cfg);
  auto res = fusion(I, contiguous_partition({2, 1, 1}), cfg);
  CHECK(res.consistent);
  CHECK(res.fused_weights == Weights{2, 1, 1});
  std::vector<PolyVector> nonzero;
  for (const auto& s : res.images) {
    CHECK(s.vec.size() == 3);
    CHECK(verify_kz(s.vec, res.fused_weights, cfg).pass);
    if (!all_zero(s.vec)) nonzero.push_back(s.vec);
  }
  CHECK(module_rank(res.fused_weights, cfg) == 1);
  CHECK(module_span_rank(nonzero, cfg.p) == 1);
  CHECK(contiguous_partition({2, 1, 1}) == Partition{{0, 1}, {2}, {3}});
  CHECK_THROWS_AS(fusion(I, Partition{{0, 1, 2}, {3}}, cfg), ConfigError);
  CHECK_THROWS_AS(fusion(I, Partition{{0, 1}, {1, 2}, {3}}, cfg), ConfigError);
}

TEST_CASE("homogenize rejects terms above the weight") {
  auto cfg = make_prime_config(5, 3, 4);
  auto K = basis_K(cfg, Route::B);
  CHECK_THROWS_AS(homogenize(K.members[1].vec, z_vars(4), 2), std::domain_error);
}
