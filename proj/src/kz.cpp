#include "kzmodp/kz.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "kzmodp/cartier.hpp"

namespace kzmodp {

std::vector<std::string> z_vars(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back("z" + std::to_string(i));
  return v;
}

std::vector<std::string> lambda_vars(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 3; i <= n; ++i) v.push_back("l" + std::to_string(i));
  return v;
}

Weights unit_weights(const PrimeConfig& cfg) { return Weights(cfg.n, 1); }

void validate_weights(const Weights& w, const PrimeConfig& cfg) {
  if (w.empty()) throw ConfigError("weights must be nonempty");
  if (w.size() > kMaxVars - 1) throw ConfigError("too many weights");
  for (auto x : w)
    if (x < 1 || x >= cfg.q) throw ConfigError("weights must satisfy 1 <= w_i < q");
}

std::uint64_t ExponentVectorM::sum() const { return std::accumulate(M.begin(), M.end(), std::uint64_t{0}); }

std::string to_string(BasisKind k) {
  switch (k) {
    case BasisKind::I:
      return "I";
    case BasisKind::J:
      return "J";
    case BasisKind::K:
      return "K";
  }
  return "?";
}

MinimalExponents minimal_exponents(const Weights& w, const PrimeConfig& cfg) {
  validate_weights(w, cfg);
  const std::uint32_t p = cfg.p;
  Fp qinv = fp::inv(cfg.q % p, p);
  MinimalExponents out;
  out.minimal.minimal = true;
  for (auto x : w) {
    Fp r = fp::mul(fp::neg(x % p, p), qinv, p);
    out.minimal.M.push_back(r == 0 ? p : r);
    out.canonical.M.push_back(static_cast<std::uint64_t>(x) * cfg.mbar());
  }
  out.canonical.minimal = out.canonical.M == out.minimal.M;
  return out;
}

FpPoly master_polynomial(const ExponentVectorM& M, const PrimeConfig& cfg) {
  std::vector<std::string> vars{"t"};
  for (auto& z : z_vars(M.M.size())) vars.push_back(z);
  FpPoly out = FpPoly::constant(vars, cfg.p, 1);
  for (std::size_t i = 0; i < M.M.size(); ++i) {
    FpPoly lin = FpPoly::variable(vars, cfg.p, 0) - FpPoly::variable(vars, cfg.p, i + 1);
    out = out * pow(lin, M.M[i]);
  }
  return out;
}

PolyVector arithmetic_vector(const ExponentVectorM& M, std::uint64_t w, std::uint32_t p, Exec exec) {
  const std::size_t n = M.M.size();
  auto vars = z_vars(n);
  PolyVector out;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<LinearFactor> fs;
    for (std::size_t i = 0; i < n; ++i) fs.push_back(LinearFactor::of_var(i, M.M[i] - (i == j ? 1 : 0)));
    out.push_back(linear_product_coefficient(fs, 0, w, vars, p, exec));
  }
  return out;
}

namespace {

bool is_zero_vector(const PolyVector& v) {
  return std::all_of(v.begin(), v.end(), [](const FpPoly& f) { return f.is_zero(); });
}

}  // namespace

SolutionBasis arithmetic_solutions(const Weights& w, const ExponentVectorM& M, const PrimeConfig& cfg, Exec exec) {
  validate_weights(w, cfg);
  if (M.M.size() != w.size()) throw ConfigError("exponent vector length differs from weights");
  const std::uint32_t p = cfg.p;
  Fp qinv = fp::inv(cfg.q % p, p);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (M.M[i] == 0) throw ConfigError("exponents must be positive");
    if (fp::from_uint(M.M[i], p) != fp::mul(fp::neg(w[i] % p, p), qinv, p))
      throw ConfigError("exponents must satisfy q M_i = -w_i (mod p)");
  }
  SolutionBasis basis;
  basis.kind = BasisKind::I;
  basis.cfg = cfg;
  basis.lambda = w;
  basis.M = M.M;
  const std::uint64_t total = M.sum();
  const std::uint64_t v = total / p;
  for (std::uint64_t l = v; l >= 1; --l) {
    Solution s;
    s.vec = arithmetic_vector(M, l * p - 1, p, exec);
    s.l = l;
    s.m = v - l + 1;
    s.degree = static_cast<std::int64_t>(total - l * p);
    if (is_zero_vector(s.vec))
      basis.excluded_zero.push_back(l);
    else
      basis.members.push_back(std::move(s));
  }
  return basis;
}

SolutionBasis basis_I(const PrimeConfig& cfg, Exec exec) {
  auto w = unit_weights(cfg);
  return arithmetic_solutions(w, minimal_exponents(w, cfg).minimal, cfg, exec);
}

namespace {

void check_shape(const PolyVector& sol, const Weights& w) {
  if (sol.size() != w.size()) throw std::invalid_argument("verify_kz: vector length differs from weights");
  for (const auto& f : sol) {
    if (f.nvars() != sol.size()) throw std::invalid_argument("verify_kz: coordinates must be polynomials in z1..zn");
    f.check_compatible(sol.front());
  }
}

KzReport verify_cleared(const PolyVector& s, const Weights& w, const PrimeConfig& cfg) {
  KzReport rep;
  rep.mode = KzMode::Cleared;
  const std::size_t n = s.size();
  const std::uint32_t p = cfg.p;
  const auto& vars = s.front().vars();
  auto z = [&](std::size_t i) { return FpPoly::variable(vars, p, i); };
  FpPoly alg(vars, p);
  for (std::size_t i = 0; i < n; ++i) alg += FpPoly(s[i]).scale(w[i] % p);
  ++rep.checks;
  if (!alg.is_zero()) {
    rep.pass = false;
    rep.fail_i = 0;
    rep.message = "sum of weighted coordinates is nonzero";
    return rep;
  }
  for (std::size_t i = 0; i < n; ++i) {
    FpPoly D = FpPoly::constant(vars, p, cfg.q % p);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) D = D * (z(i) - z(j));
    std::vector<FpPoly> partial(n, FpPoly::constant(vars, p, 1));  // prod_{l != i, j}(z_i - z_l)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t l = 0; l < n; ++l)
        if (l != i && l != j) partial[j] = partial[j] * (z(i) - z(l));
    }
    for (std::size_t c = 0; c < n; ++c) {
      FpPoly lhs = D * partial_derivative(s[c], i);
      FpPoly rhs(vars, p);
      if (c == i) {
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) rhs += partial[j] * FpPoly(s[j] - s[i]).scale(w[j] % p);
      } else {
        rhs = partial[c] * FpPoly(s[i] - s[c]).scale(w[i] % p);
      }
      ++rep.checks;
      if (lhs != rhs) {
        rep.pass = false;
        rep.fail_i = i + 1;
        rep.fail_coord = c + 1;
        rep.message = "differential equation fails";
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace

namespace {

using CoordinateGetter = std::function<const FpPoly&(std::size_t, FpPoly&)>;

// Each coordinate is flattened once into a sorted term list. The shift
// mu -> mu - e_i + e_c preserves lexicographic order (and the order of packed
// keys), so every pair identity is a linear three-way merge.
template <class Key>
using SortedTerms = std::vector<std::pair<Key, Fp>>;

struct PackedOps {
  unsigned bits;
  std::uint64_t mask;
  std::uint32_t exponent(std::uint64_t k, std::size_t i) const { return (k >> (bits * i)) & mask; }
  std::uint64_t shift(std::uint64_t k, std::size_t i, std::size_t c) const {
    return k - (std::uint64_t{1} << (bits * i)) + (std::uint64_t{1} << (bits * c));
  }
};

struct MonomialOps {
  std::uint32_t exponent(const Monomial& m, std::size_t i) const { return m[i]; }
  Monomial shift(Monomial m, std::size_t i, std::size_t c) const {
    --m[i];
    ++m[c];
    return m;
  }
};

// Zero iff (q z_i d_i + w_i) s_c - q z_c d_i s_c - w_i s_i vanishes.
template <class Key, class Ops>
bool pair_merge(const SortedTerms<Key>& sc, const SortedTerms<Key>& si, std::size_t i, std::size_t c, Fp wi, Fp q,
                std::uint32_t p, const Ops& ops) {
  std::size_t a = 0, b = 0, t = 0;
  auto skip_b = [&] {
    while (b < sc.size() && ops.exponent(sc[b].first, i) == 0) ++b;
  };
  skip_b();
  while (a < sc.size() || b < sc.size() || t < si.size()) {
    std::optional<Key> key;
    auto consider = [&](const Key& k) {
      if (!key || k < *key) key = k;
    };
    if (a < sc.size()) consider(sc[a].first);
    if (b < sc.size()) consider(ops.shift(sc[b].first, i, c));
    if (t < si.size()) consider(si[t].first);
    Fp sum = 0;
    if (a < sc.size() && sc[a].first == *key) {
      Fp e = fp::from_uint(ops.exponent(sc[a].first, i), p);
      sum = fp::add(sum, fp::mul(fp::add(fp::mul(q, e, p), wi, p), sc[a].second, p), p);
      ++a;
    }
    if (b < sc.size() && ops.shift(sc[b].first, i, c) == *key) {
      Fp e = fp::from_uint(ops.exponent(sc[b].first, i), p);
      sum = fp::sub(sum, fp::mul(fp::mul(q, e, p), sc[b].second, p), p);
      ++b;
      skip_b();
    }
    if (t < si.size() && si[t].first == *key) {
      sum = fp::sub(sum, fp::mul(wi, si[t].second, p), p);
      ++t;
    }
    if (sum != 0) return false;
  }
  return true;
}

template <class Key>
bool weighted_sum_vanishes(const std::vector<SortedTerms<Key>>& s, const Weights& w, std::uint32_t p) {
  SortedTerms<Key> acc;
  for (std::size_t j = 0; j < s.size(); ++j) {
    SortedTerms<Key> next;
    next.reserve(acc.size() + s[j].size());
    const Fp wj = w[j] % p;
    std::size_t x = 0, y = 0;
    while (x < acc.size() || y < s[j].size()) {
      if (y == s[j].size() || (x < acc.size() && acc[x].first < s[j][y].first)) {
        next.push_back(acc[x++]);
      } else if (x == acc.size() || s[j][y].first < acc[x].first) {
        next.emplace_back(s[j][y].first, fp::mul(wj, s[j][y].second, p));
        ++y;
      } else {
        Fp v = fp::add(acc[x].second, fp::mul(wj, s[j][y].second, p), p);
        if (v != 0) next.emplace_back(acc[x].first, v);
        ++x;
        ++y;
      }
    }
    acc = std::move(next);
  }
  return acc.empty();
}

template <class Key, class Ops>
KzReport run_reduced(const std::vector<SortedTerms<Key>>& s, const Weights& w, const PrimeConfig& cfg,
                     const Ops& ops) {
  KzReport rep;
  const std::uint32_t p = cfg.p;
  const Fp q = cfg.q % p;
  const std::size_t n = s.size();
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      ++rep.checks;
      if (!pair_merge(s[c], s[i], i, c, w[i] % p, q, p, ops)) {
        rep.pass = false;
        rep.fail_i = i + 1;
        rep.fail_coord = c + 1;
        rep.message = "differential equation fails";
        return rep;
      }
    }
  ++rep.checks;
  if (!weighted_sum_vanishes(s, w, p)) {
    rep.pass = false;
    rep.fail_i = 0;
    rep.message = "sum of weighted coordinates is nonzero";
  }
  return rep;
}

KzReport verify_reduced(std::size_t n, const CoordinateGetter& get, const Weights& w, const PrimeConfig& cfg) {
  if (w.size() != n) throw std::invalid_argument("verify_kz: vector length differs from weights");
  for (auto x : w)
    if (x % cfg.p == 0) throw std::invalid_argument("verify_kz: weights must be invertible mod p");
  std::vector<SortedTerms<Monomial>> flat(n);
  std::uint32_t max_exp = 0;
  std::vector<std::string> vars;
  FpPoly store;
  for (std::size_t j = 0; j < n; ++j) {
    const FpPoly& f = get(j, store);
    if (f.nvars() != n) throw std::invalid_argument("verify_kz: coordinates must be polynomials in z1..zn");
    if (j == 0) vars = f.vars();
    if (f.vars() != vars) throw std::invalid_argument("verify_kz: coordinates over different variables");
    flat[j].assign(f.terms().begin(), f.terms().end());
    for (const auto& [m, unused] : flat[j])
      for (std::size_t i = 0; i < n; ++i) max_exp = std::max(max_exp, m[i]);
    store = FpPoly();
  }
  const unsigned bits = static_cast<unsigned>(64 / n);
  const std::uint64_t mask = bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  if (static_cast<std::uint64_t>(max_exp) + 1 < mask) {
    std::vector<SortedTerms<std::uint64_t>> packed(n);
    for (std::size_t j = 0; j < n; ++j) {
      packed[j].reserve(flat[j].size());
      for (const auto& [m, v] : flat[j]) {
        // Variable 0 in the top field keeps packed order equal to lex order.
        std::uint64_t k = 0;
        for (std::size_t i = 0; i < n; ++i) k |= static_cast<std::uint64_t>(m[i]) << (bits * (n - 1 - i));
        packed[j].emplace_back(k, v);
      }
      SortedTerms<Monomial>().swap(flat[j]);
      std::sort(packed[j].begin(), packed[j].end());
    }
    // Field of variable i sits at position n - 1 - i.
    struct Reversed {
      PackedOps base;
      std::size_t n;
      std::uint32_t exponent(std::uint64_t k, std::size_t i) const { return base.exponent(k, n - 1 - i); }
      std::uint64_t shift(std::uint64_t k, std::size_t i, std::size_t c) const {
        return base.shift(k, n - 1 - i, n - 1 - c);
      }
    };
    return run_reduced(packed, w, cfg, Reversed{PackedOps{bits, mask}, n});
  }
  for (auto& v : flat) std::sort(v.begin(), v.end());
  return run_reduced(flat, w, cfg, MonomialOps{});
}

}  // namespace

KzReport verify_kz(const PolyVector& sol, const Weights& w, const PrimeConfig& cfg, KzMode mode) {
  check_shape(sol, w);
  if (mode == KzMode::Cleared) return verify_cleared(sol, w, cfg);
  return verify_reduced(
      sol.size(), [&](std::size_t j, FpPoly&) -> const FpPoly& { return sol[j]; }, w, cfg);
}

KzReport verify_kz_lazy(std::size_t n, const std::function<FpPoly(std::size_t)>& coordinate, const Weights& w,
                        const PrimeConfig& cfg) {
  return verify_reduced(
      n,
      [&](std::size_t j, FpPoly& store) -> const FpPoly& {
        store = coordinate(j);
        return store;
      },
      w, cfg);
}

std::uint64_t module_rank(const Weights& w, const PrimeConfig& cfg) {
  validate_weights(w, cfg);
  std::uint64_t total_w = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
  if (total_w >= cfg.p) throw ConfigError("module_rank requires p > sum of weights");
  auto me = minimal_exponents(w, cfg);
  std::uint64_t rank = me.minimal.sum() / cfg.p;
  if (total_w == cfg.n) {
    std::uint64_t expected = static_cast<std::uint64_t>(cfg.a1()) * cfg.k - e_vanishing(w, cfg.a1(), cfg.q).total;
    if (rank != expected) throw std::logic_error("module_rank: rank differs from a_1 k - e(a_1)");
  }
  return rank;
}

namespace {

Monomial residue(const Monomial& m, std::uint32_t p) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r[i] = m[i] % p;
  return r;
}

std::size_t rank_mod_p(std::vector<std::vector<Fp>> rows, std::uint32_t p) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  std::size_t cols = rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    Fp inv = fp::inv(rows[rank][c], p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Fp factor = fp::mul(rows[r][c], inv, p);
      for (std::size_t k = c; k < cols; ++k)
        rows[r][k] = fp::sub(rows[r][k], fp::mul(factor, rows[rank][k], p), p);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t module_span_rank(const std::vector<PolyVector>& members, std::uint32_t p, std::uint64_t seed, int trials) {
  if (members.empty()) return 0;
  const std::size_t n = members.front().size();
  // Column index per (coordinate, residue class of the exponent).
  std::vector<std::unordered_map<Monomial, std::size_t, MonomialHash>> col(n);
  std::size_t ncols = 0;
  for (const auto& v : members)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [m, c] : v[j].terms()) {
        auto [it, inserted] = col[j].try_emplace(residue(m, p), ncols);
        if (inserted) ++ncols;
      }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(1, p - 1);
  std::size_t best = 0;
  const std::size_t nv = members.front().front().nvars();
  for (int t = 0; t < trials; ++t) {
    std::vector<Fp> point(nv);
    for (auto& y : point) y = dist(rng);
    std::vector<std::vector<Fp>> rows(members.size(), std::vector<Fp>(ncols, 0));
    for (std::size_t r = 0; r < members.size(); ++r)
      for (std::size_t j = 0; j < n; ++j)
        for (const auto& [m, c] : members[r][j].terms()) {
          Fp val = c;
          for (std::size_t i = 0; i < nv; ++i)
            if (m[i] >= p) val = fp::mul(val, fp::pow(point[i], m[i] / p, p), p);
          std::size_t k = col[j].at(residue(m, p));
          rows[r][k] = fp::add(rows[r][k], val, p);
        }
    best = std::max(best, rank_mod_p(std::move(rows), p));
    if (best == members.size()) break;
  }
  return best;
}

IndependenceReport independence_certificate(const std::vector<PolyVector>& members, std::uint32_t p,
                                            std::uint64_t seed, int trials) {
  IndependenceReport rep;
  rep.expected = members.size();
  std::unordered_map<Monomial, std::size_t, MonomialHash> owner;
  for (std::size_t r = 0; r < members.size() && rep.disjoint_supports; ++r) {
    std::unordered_map<Monomial, bool, MonomialHash> mine;
    for (const auto& [m, c] : members[r].front().terms()) mine.emplace(residue(m, p), true);
    for (const auto& [res, unused] : mine) {
      auto [it, inserted] = owner.try_emplace(res, r);
      if (!inserted) {
        rep.disjoint_supports = false;
        rep.message = "members " + std::to_string(it->second + 1) + " and " + std::to_string(r + 1) +
                      " share a residue class in the first coordinate";
        break;
      }
    }
  }
  rep.rank = module_span_rank(members, p, seed, trials);
  rep.pass = rep.disjoint_supports && rep.rank == rep.expected;
  if (rep.message.empty() && !rep.pass) rep.message = "rank deficit";
  return rep;
}

std::optional<std::vector<FpPoly>> express_in_basis(const PolyVector& s, const SolutionBasis& basis) {
  const std::uint32_t p = basis.cfg.p;
  if (basis.members.empty()) return std::nullopt;
  const auto& vars = basis.members.front().vec.front().vars();
  std::unordered_map<Monomial, std::size_t, MonomialHash> owner;
  std::vector<Monomial> pivot(basis.members.size());
  std::vector<FpPoly> pivot_part;
  for (std::size_t r = 0; r < basis.members.size(); ++r) {
    std::unordered_map<Monomial, FpPoly, MonomialHash> parts;
    for (const auto& [m, c] : basis.members[r].vec.front().terms()) {
      Monomial res = residue(m, p);
      auto [it, inserted] = owner.try_emplace(res, r);
      if (!inserted && it->second != r) throw std::invalid_argument("express_in_basis: supports are not disjoint");
      parts.try_emplace(res, FpPoly(vars, p)).first->second.add_term(m, c);
    }
    auto best = std::min_element(parts.begin(), parts.end(),
                                 [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
    pivot[r] = best->first;
    pivot_part.push_back(best->second);
  }
  std::vector<FpPoly> target(basis.members.size(), FpPoly(vars, p));
  for (const auto& [m, c] : s.front().terms()) {
    Monomial res = residue(m, p);
    auto it = owner.find(res);
    if (it == owner.end()) return std::nullopt;
    if (res == pivot[it->second]) target[it->second].add_term(m, c);
  }
  std::vector<FpPoly> coeffs;
  for (std::size_t r = 0; r < basis.members.size(); ++r) {
    auto q = divide_exact(target[r], pivot_part[r]);
    if (!q) return std::nullopt;
    for (const auto& [m, c] : q->terms())
      for (std::size_t i = 0; i < q->nvars(); ++i)
        if (m[i] % p != 0) return std::nullopt;
    coeffs.push_back(std::move(*q));
  }
  for (std::size_t j = 0; j < s.size(); ++j) {
    FpPoly rebuilt(vars, p);
    for (std::size_t r = 0; r < basis.members.size(); ++r) rebuilt += coeffs[r] * basis.members[r].vec[j];
    if (rebuilt != s[j]) return std::nullopt;
  }
  return coeffs;
}

EmbeddingMatrix embedding_matrix(const ExponentVectorM& Mprime, const ExponentVectorM& M, const PrimeConfig& cfg) {
  const std::uint32_t p = cfg.p;
  if (Mprime.M.size() != M.M.size()) throw ConfigError("embedding: length mismatch");
  std::vector<std::uint64_t> N;
  for (std::size_t i = 0; i < M.M.size(); ++i) {
    if (Mprime.M[i] < M.M[i]) throw ConfigError("embedding: M' must dominate M");
    if ((Mprime.M[i] - M.M[i]) % p != 0) throw ConfigError("embedding: M'_i - M_i must be a multiple of p");
    N.push_back((Mprime.M[i] - M.M[i]) / p);
  }
  const std::uint64_t sumN = std::accumulate(N.begin(), N.end(), std::uint64_t{0});
  auto vars = z_vars(M.M.size());
  std::vector<LinearFactor> fs;
  for (std::size_t i = 0; i < N.size(); ++i) fs.push_back(LinearFactor::of_var(i, N[i]));
  // prod (t^p - z_i^p)^{N_i} is the Frobenius image of prod (t - z_i)^{N_i}.
  std::vector<FpPoly> c;
  for (std::uint64_t r = 0; r <= sumN; ++r)
    c.push_back(frobenius(linear_product_coefficient(fs, 0, r, vars, p, Exec::Serial), 1));
  EmbeddingMatrix E;
  const std::uint64_t v = M.sum() / p, vp = Mprime.sum() / p;
  for (std::uint64_t l = vp; l >= 1; --l) E.row_l.push_back(l);
  for (std::uint64_t l = v; l >= 1; --l) E.col_l.push_back(l);
  for (auto lp : E.row_l) {
    std::vector<FpPoly> row;
    for (auto l : E.col_l) row.push_back(lp >= l && lp - l <= sumN ? c[lp - l] : FpPoly(vars, p));
    E.entries.push_back(std::move(row));
  }
  return E;
}

EmbeddingMatrix compose(const EmbeddingMatrix& outer, const EmbeddingMatrix& inner) {
  if (outer.col_l != inner.row_l) throw std::invalid_argument("compose: index mismatch");
  EmbeddingMatrix out;
  out.row_l = outer.row_l;
  out.col_l = inner.col_l;
  const auto& proto = inner.entries.front().front();
  for (std::size_t r = 0; r < outer.row_l.size(); ++r) {
    std::vector<FpPoly> row;
    for (std::size_t c = 0; c < inner.col_l.size(); ++c) {
      FpPoly acc(proto.vars(), proto.p());
      for (std::size_t k = 0; k < outer.col_l.size(); ++k) acc += outer.entries[r][k] * inner.entries[k][c];
      row.push_back(std::move(acc));
    }
    out.entries.push_back(std::move(row));
  }
  return out;
}

EmbeddingReport verify_embedding(const ExponentVectorM& Mprime, const ExponentVectorM& M, const PrimeConfig& cfg) {
  const std::uint32_t p = cfg.p;
  EmbeddingReport rep;
  auto E = embedding_matrix(Mprime, M, cfg);
  const std::size_t n = M.M.size();
  auto vars = z_vars(n);

  rep.unit_lower_triangular = true;
  for (std::size_t i = 0; i < E.col_l.size(); ++i)
    for (std::size_t j = 0; j < E.col_l.size(); ++j) {
      const FpPoly& e = E.entries[i][j];
      if (i == j && e != FpPoly::constant(vars, p, 1)) rep.unit_lower_triangular = false;
      if (j > i && !e.is_zero()) rep.unit_lower_triangular = false;
    }

  rep.entries_in_frobenius_image = true;
  for (const auto& row : E.entries)
    for (const auto& e : row)
      for (const auto& [m, c] : e.terms())
        for (std::size_t i = 0; i < n; ++i)
          if (m[i] % p != 0) rep.entries_in_frobenius_image = false;

  rep.coefficient_identity = true;
  std::vector<PolyVector> low;
  for (auto l : E.col_l) low.push_back(arithmetic_vector(M, l * p - 1, p));
  for (std::size_t r = 0; r < E.row_l.size(); ++r) {
    PolyVector lhs = arithmetic_vector(Mprime, E.row_l[r] * p - 1, p);
    for (std::size_t j = 0; j < n; ++j) {
      FpPoly rhs(vars, p);
      for (std::size_t c = 0; c < E.col_l.size(); ++c) rhs += E.entries[r][c] * low[c][j];
      if (rhs != lhs[j]) rep.coefficient_identity = false;
    }
  }

  // Whole-polynomial identity in (t, z), built by repeated squaring.
  rep.full_reexpansion = true;
  std::vector<std::string> tv{"t"};
  for (auto& z : vars) tv.push_back(z);
  auto lin = [&](std::size_t i) { return FpPoly::variable(tv, p, 0) - FpPoly::variable(tv, p, i + 1); };
  FpPoly Q = FpPoly::constant(tv, p, 1);
  for (std::size_t i = 0; i < n; ++i) Q = Q * pow(frobenius(lin(i), 1), (Mprime.M[i] - M.M[i]) / p);
  for (std::size_t j = 0; j < n; ++j) {
    FpPoly Pj = FpPoly::constant(tv, p, 1), Pjp = FpPoly::constant(tv, p, 1);
    for (std::size_t i = 0; i < n; ++i) {
      Pj = Pj * pow(lin(i), M.M[i] - (i == j));
      Pjp = Pjp * pow(lin(i), Mprime.M[i] - (i == j));
    }
    if (Q * Pj != Pjp) rep.full_reexpansion = false;
  }
  return rep;
}

Partition contiguous_partition(const Weights& fused) {
  Partition out;
  std::size_t next = 0;
  for (auto w : fused) {
    std::vector<std::size_t> block;
    for (std::uint32_t i = 0; i < w; ++i) block.push_back(next++);
    out.push_back(std::move(block));
  }
  return out;
}

FusionResult fusion(const SolutionBasis& basis, const Partition& partition, const PrimeConfig& cfg) {
  const std::size_t n = basis.lambda.size();
  std::vector<std::size_t> block_of(n, SIZE_MAX);
  FusionResult res;
  res.partition = partition;
  for (std::size_t b = 0; b < partition.size(); ++b) {
    if (partition[b].empty()) throw ConfigError("fusion: empty block");
    std::uint64_t wsum = 0, msum = 0;
    for (auto i : partition[b]) {
      if (i >= n || block_of[i] != SIZE_MAX) throw ConfigError("fusion: blocks must partition the indices");
      block_of[i] = b;
      wsum += basis.lambda[i];
      msum += basis.M[i];
    }
    if (wsum >= cfg.q) throw ConfigError("fusion: fused weight must be < q");
    res.fused_weights.push_back(static_cast<std::uint32_t>(wsum));
    res.fused_M.M.push_back(msum);
  }
  for (auto b : block_of)
    if (b == SIZE_MAX) throw ConfigError("fusion: blocks must partition the indices");
  auto target = z_vars(partition.size());
  for (const auto& s : basis.members) {
    Solution img;
    img.l = s.l;
    img.m = s.m;
    img.degree = s.degree;
    for (std::size_t b = 0; b < partition.size(); ++b) {
      std::optional<FpPoly> coord;
      for (auto a : partition[b]) {
        FpPoly f = map_variables(s.vec[a], target, block_of);
        if (!coord)
          coord = std::move(f);
        else if (*coord != f)
          res.consistent = false;
      }
      img.vec.push_back(std::move(*coord));
    }
    res.images.push_back(std::move(img));
  }
  return res;
}

std::int64_t j_degree(const PrimeConfig& cfg, std::uint64_t m) {
  return static_cast<std::int64_t>(cfg.mbar()) + static_cast<std::int64_t>((m - 1) * cfg.p) -
         static_cast<std::int64_t>(cfg.k);
}

SolutionBasis basis_J_from_I(const SolutionBasis& I) {
  const auto& cfg = I.cfg;
  const std::uint64_t top = static_cast<std::uint64_t>(cfg.a1()) * cfg.k;
  if (I.members.size() != top) throw std::invalid_argument("basis_J: I basis is incomplete");
  SolutionBasis J = I;
  J.kind = BasisKind::J;
  J.members.clear();
  const auto& vars = I.members.front().vec.front().vars();
  for (std::uint64_t m = 1; m <= top; ++m) {
    Solution s;
    s.m = m;
    s.l = top - m + 1;
    s.degree = j_degree(cfg, m);
    s.vec.assign(cfg.n, FpPoly(vars, cfg.p));
    for (std::uint64_t l = 1; l <= m; ++l) {
      Monomial zm;
      zm[0] = static_cast<std::uint32_t>((l - 1) * cfg.p);
      Fp c = fp::binom(top - m - 1 + l, top - m, cfg.p);
      FpPoly factor = FpPoly::monomial(vars, cfg.p, zm, c);
      const auto& src = I.members[m - l].vec;  // I^{m+1-l}
      for (std::size_t j = 0; j < cfg.n; ++j) s.vec[j] += factor * src[j];
    }
    J.members.push_back(std::move(s));
  }
  return J;
}

SolutionBasis basis_J(const PrimeConfig& cfg, Route route, Exec exec) {
  if (route == Route::A) return basis_J_from_I(basis_I(cfg, exec));
  const std::uint64_t Mb = cfg.mbar();
  const std::uint64_t top = static_cast<std::uint64_t>(cfg.a1()) * cfg.k;
  SolutionBasis J;
  J.kind = BasisKind::J;
  J.cfg = cfg;
  J.lambda = unit_weights(cfg);
  J.M.assign(cfg.n, Mb);
  auto vars = z_vars(cfg.n);
  std::vector<std::size_t> others;
  for (std::size_t i = 1; i < cfg.n; ++i) others.push_back(i);
  for (std::uint64_t m = 1; m <= top; ++m) {
    Solution s;
    s.m = m;
    s.l = top - m + 1;
    s.degree = j_degree(cfg, m);
    const std::uint64_t w = (top - m) * cfg.p + cfg.p - 1;
    for (std::size_t j = 0; j < cfg.n; ++j) {
      // x^M prod_{i>=2} (x - u_i)^M with u_i = z_i - z_1, one factor lowered.
      std::uint64_t shift = Mb - (j == 0 ? 1 : 0);
      std::vector<LinearFactor> fs;
      for (std::size_t i = 1; i < cfg.n; ++i) fs.push_back(LinearFactor::of_var(i, Mb - (i == j ? 1 : 0)));
      FpPoly g = linear_product_coefficient(fs, shift, w, vars, cfg.p, exec);
      s.vec.push_back(shift_variables(g, 0, others));
    }
    J.members.push_back(std::move(s));
  }
  return J;
}

std::vector<Fp> k_closed_form_term(std::uint64_t m, const std::vector<std::uint64_t>& l, const PrimeConfig& cfg) {
  const std::uint32_t p = cfg.p;
  const std::uint64_t Mb = cfg.mbar();
  std::vector<Fp> out(cfg.n, 0);
  std::uint64_t S = 0;
  for (auto x : l) {
    if (x > Mb) return out;
    S += x;
  }
  std::int64_t t = static_cast<std::int64_t>(S + cfg.k) - static_cast<std::int64_t>((m - 1) * p);
  if (t < 0 || t > static_cast<std::int64_t>(Mb)) return out;
  Fp c = fp::mul(fp::sign(Mb + (m - 1) * p - cfg.k, p), fp::binom(Mb, static_cast<std::uint64_t>(t), p), p);
  for (auto x : l) c = fp::mul(c, fp::binom(Mb, x, p), p);
  out[0] = c;
  out[1] = fp::mul(c, fp::neg(fp::from_uint(static_cast<std::uint64_t>(cfg.q) * (S + cfg.k), p), p), p);
  for (std::size_t i = 0; i < l.size(); ++i)
    out[i + 2] = fp::mul(c, fp::from_uint(static_cast<std::uint64_t>(cfg.q) * l[i] + 1, p), p);
  return out;
}

SolutionBasis basis_K(const PrimeConfig& cfg, Route route, Exec exec) {
  const std::uint64_t Mb = cfg.mbar();
  const std::uint64_t top = static_cast<std::uint64_t>(cfg.a1()) * cfg.k;
  const std::size_t nl = cfg.n - 2;
  auto vars = lambda_vars(cfg.n);
  SolutionBasis K;
  K.kind = BasisKind::K;
  K.cfg = cfg;
  K.lambda = unit_weights(cfg);
  K.M.assign(cfg.n, Mb);
  for (std::uint64_t m = 1; m <= top; ++m) {
    Solution s;
    s.m = m;
    s.l = top - m + 1;
    s.degree = j_degree(cfg, m);  // homogenisation weight
    if (route == Route::A) {
      const std::uint64_t w = (top - m) * cfg.p + cfg.p - 1;
      for (std::size_t j = 0; j < cfg.n; ++j) {
        std::uint64_t shift = Mb - (j == 0 ? 1 : 0);
        std::vector<LinearFactor> fs{LinearFactor::of_const(1, Mb - (j == 1 ? 1 : 0))};
        for (std::size_t i = 0; i < nl; ++i) fs.push_back(LinearFactor::of_var(i, Mb - (i + 2 == j ? 1 : 0)));
        s.vec.push_back(linear_product_coefficient(fs, shift, w, vars, cfg.p, exec));
      }
    } else {
      s.vec.assign(cfg.n, FpPoly(vars, cfg.p));
      std::vector<std::uint64_t> l(nl, 0);
      Monomial mono;
      // Odometer over [0, Mb]^{n-2}.
      while (true) {
        auto term = k_closed_form_term(m, l, cfg);
        if (term[0] != 0) {
          for (std::size_t i = 0; i < nl; ++i) mono[i] = static_cast<std::uint32_t>(l[i]);
          for (std::size_t j = 0; j < cfg.n; ++j) s.vec[j].add_term(mono, term[j]);
        }
        std::size_t i = 0;
        while (i < nl && l[i] == Mb) l[i++] = 0;
        if (i == nl) break;
        ++l[i];
      }
    }
    K.members.push_back(std::move(s));
  }
  return K;
}

FpPoly homogenize(const FpPoly& f, const std::vector<std::string>& zvars, std::uint64_t weight) {
  const std::size_t n = zvars.size();
  if (f.nvars() + 2 != n) throw std::invalid_argument("homogenize: expected n - 2 lambda variables");
  FpPoly g(zvars, f.p());
  for (const auto& [m, c] : f.terms()) {
    std::uint64_t d = m.degree();
    if (d > weight) throw std::domain_error("homogenize: term degree exceeds weight, a denominator would remain");
    Monomial zm;
    for (std::size_t i = 0; i < f.nvars(); ++i) zm[i + 2] = m[i];
    zm[1] = static_cast<std::uint32_t>(weight - d);
    g.add_term(zm, c);
  }
  std::vector<std::size_t> others;
  for (std::size_t i = 1; i < n; ++i) others.push_back(i);
  return shift_variables(g, 0, others);
}

PolyVector homogenize(const PolyVector& f, const std::vector<std::string>& zvars, std::uint64_t weight) {
  PolyVector out;
  for (const auto& x : f) out.push_back(homogenize(x, zvars, weight));
  return out;
}

}  // namespace kzmodp
