#include "kzmodp/compare.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace kzmodp {

NegInvQBinomials::NegInvQBinomials(std::uint32_t q, std::uint64_t max_m) {
  values_.reserve(max_m + 1);
  values_.emplace_back(1);
  for (std::uint64_t m = 0; m < max_m; ++m) {
    // binom(x, m+1) = binom(x, m) (x - m)/(m + 1) at x = -1/q
    Rational ratio(-(BigInt(1) + BigInt(q) * m), BigInt(q) * (m + 1));
    values_.push_back(values_.back() * ratio);
  }
}

LCoefficient l_coefficient(const Tuple& k, const PrimeConfig& cfg, const NegInvQBinomials& table, bool reduce) {
  const std::uint64_t S = std::accumulate(k.begin(), k.end(), std::uint64_t{0});
  if (k.size() + 2 != cfg.n) throw std::invalid_argument("l_coefficient: tuple must have n - 2 entries");
  if (S + cfg.k > table.max()) throw std::invalid_argument("l_coefficient: binomial table too short");
  LCoefficient out;
  out.k = k;
  Rational c = table(S + cfg.k);
  if (cfg.k % 2) c = -c;
  for (auto x : k) c *= table(x);
  out.value.push_back(c);
  out.value.push_back(c * Rational(-BigInt(cfg.q) * (S + cfg.k)));
  for (auto x : k) out.value.push_back(c * Rational(BigInt(cfg.q) * x + 1));
  bool first = true;
  for (const auto& v : out.value) {
    if (v == 0) continue;
    int val = p_valuation(v, cfg.p);
    out.p_valuation = first ? val : std::min(out.p_valuation, val);
    first = false;
  }
  if (reduce) {
    std::vector<Fp> r;
    for (const auto& v : out.value) r.push_back(reduce_mod_p(v, cfg.p));
    out.reduced = std::move(r);
  }
  return out;
}

LCoefficient l_coefficient(const Tuple& k, const PrimeConfig& cfg, bool reduce) {
  const std::uint64_t S = std::accumulate(k.begin(), k.end(), std::uint64_t{0});
  std::uint64_t top = S + cfg.k;
  for (auto x : k) top = std::max(top, x);
  return l_coefficient(k, cfg, NegInvQBinomials(cfg.q, top), reduce);
}

ShiftProfile shift_profile(const Tuple& k, const PrimeConfig& cfg) {
  const std::uint32_t p = cfg.p;
  ShiftProfile sp;
  std::vector<PDigits> dig;
  for (auto x : k) {
    dig.push_back(base_p_digits(x, p));
    if (!dig.back().digits.empty()) sp.b = std::max<unsigned>(sp.b, dig.back().digits.size() - 1);
  }
  sp.m.push_back(static_cast<std::uint64_t>(cfg.k) + 1);
  sp.admissible = true;
  auto fail = [&](std::string why) {
    if (sp.admissible) sp.reason = std::move(why);
    sp.admissible = false;
  };
  for (unsigned s = 0; s <= sp.b; ++s) {
    std::vector<std::uint32_t> ds;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      std::uint32_t d = s < dig[i].digits.size() ? dig[i].digits[s] : 0;
      ds.push_back(d);
      sum += d;
      if (d > cfg.A_at(s))
        fail("digit k_" + std::to_string(i + 3) + "^" + std::to_string(s) + " = " + std::to_string(d) + " exceeds A_" +
             std::to_string(s % cfg.d) + " = " + std::to_string(cfg.A_at(s)));
    }
    sp.digits.push_back(std::move(ds));
    const std::uint64_t t = sum + sp.m.back() - 1;
    const std::uint64_t next = t / p + 1;
    const std::uint64_t r = t - (next - 1) * p;
    // Only digit overflow can push the carry out of range.
    if (next > static_cast<std::uint64_t>(cfg.a_at(s + 1)) * cfg.k && sp.admissible)
      throw std::logic_error("shift_profile: m_{s+1} left its range");
    sp.m.push_back(next);
    sp.r.push_back(r);
    if (r > cfg.A_at(s))
      fail("r_" + std::to_string(s) + " = " + std::to_string(r) + " exceeds A_" + std::to_string(s % cfg.d));
  }
  if (sp.m.back() - 1 > cfg.A_at(sp.b + 1))
    fail("m_{b+1} - 1 = " + std::to_string(sp.m.back() - 1) + " exceeds A_" + std::to_string((sp.b + 1) % cfg.d));
  return sp;
}

bool in_set_M(const Tuple& m, const PrimeConfig& cfg) {
  if (m.size() < 2 || m[0] != static_cast<std::uint64_t>(cfg.k) + 1) return false;
  for (std::size_t s = 1; s < m.size(); ++s)
    if (m[s] < 1 || m[s] > static_cast<std::uint64_t>(cfg.a_at(s)) * cfg.k) return false;
  return true;
}

namespace {

// Parity of (a p^e - 1)/q, evaluated modulo 2q.
std::uint64_t prefactor_exponent_parity(std::uint32_t a, std::uint64_t e, const PrimeConfig& cfg) {
  const std::uint64_t mod = 2ull * cfg.q;
  std::uint64_t x = a % mod;
  for (std::uint64_t i = 0; i < e; ++i) x = x * (cfg.p % mod) % mod;
  x = (x + mod - 1) % mod;
  return (x / cfg.q) & 1u;
}

}  // namespace

Fp n_prefactor(const Tuple& m, const PrimeConfig& cfg) {
  if (!in_set_M(m, cfg)) throw std::out_of_range("m-tuple is not in the admissible index set");
  const std::uint64_t b = m.size() - 2;
  const std::uint64_t top = m.back();
  std::uint64_t parity = prefactor_exponent_parity(cfg.a_at(b + 1), b + 1, cfg) + top - 1;
  return fp::mul(fp::sign(parity, cfg.p), fp::binom(cfg.A_at(b + 1), top - 1, cfg.p), cfg.p);
}

std::string to_string(NTermMode mode) { return mode == NTermMode::Literal ? "literal" : "top-level-nonzero"; }

DecompositionContext::DecompositionContext(const PrimeConfig& c, Exec exec)
    : cfg(c), K(basis_K(c, Route::B, exec)), hw(curve_Y(c), c, exec) {}

PolyVector n_term(const Tuple& m, const DecompositionContext& ctx, std::uint64_t max_degree, NTermMode mode) {
  const auto& cfg = ctx.cfg;
  Fp pre = n_prefactor(m, cfg);
  const unsigned b = static_cast<unsigned>(m.size() - 2);
  const auto vars = lambda_vars(cfg.n);
  FpPoly scalar = FpPoly::constant(vars, cfg.p, pre);
  for (unsigned s = 1; s <= b && !scalar.is_zero(); ++s) {
    FpPoly entry = ctx.hw.block(cfg.a_at(s)).entries[m[s] - 1][m[s + 1] - 1];
    if (s == b && mode == NTermMode::TopLevelNonzero) entry.set_term(Monomial{}, 0);
    scalar = mul_truncated(scalar, truncate_degree(frobenius(entry, s), max_degree), max_degree);
  }
  PolyVector out;
  for (const auto& coord : ctx.K.members.at(m[1] - 1).vec)
    out.push_back(scalar.is_zero() ? FpPoly(vars, cfg.p) : mul_truncated(scalar, coord, max_degree));
  return out;
}

std::vector<Fp> product_form(const Tuple& k, const PrimeConfig& cfg) {
  std::vector<Fp> out(cfg.n, 0);
  auto sp = shift_profile(k, cfg);
  if (!sp.admissible) return out;
  Fp c = n_prefactor(sp.m, cfg);
  for (unsigned s = 1; s <= sp.b; ++s) {
    Tuple l(sp.digits[s].begin(), sp.digits[s].end());
    c = fp::mul(c, hw_closed_form_term(cfg.a_at(s), sp.m[s], sp.m[s + 1], l, cfg), cfg.p);
  }
  Tuple l0(sp.digits[0].begin(), sp.digits[0].end());
  auto kv = k_closed_form_term(sp.m[1], l0, cfg);
  for (std::size_t j = 0; j < cfg.n; ++j) out[j] = fp::mul(c, kv[j], cfg.p);
  return out;
}

namespace {

struct MonoHash {
  std::size_t operator()(const Tuple& t) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : t) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

struct Contribution {
  std::vector<Fp> value;
  Tuple owner;
};

void for_each_m_tuple(unsigned b, const PrimeConfig& cfg, const std::function<void(const Tuple&)>& fn) {
  Tuple m(b + 2, 1);
  m[0] = static_cast<std::uint64_t>(cfg.k) + 1;
  while (true) {
    fn(m);
    std::size_t s = 1;
    while (s <= b + 1 && m[s] == static_cast<std::uint64_t>(cfg.a_at(s)) * cfg.k) m[s++] = 1;
    if (s > b + 1) return;
    ++m[s];
  }
}

void for_each_k_tuple(std::size_t len, std::uint64_t max_sum, const std::function<void(const Tuple&)>& fn) {
  Tuple k(len, 0);
  if (len == 0) {
    fn(k);
    return;
  }
  std::uint64_t sum = 0;
  while (true) {
    fn(k);
    std::size_t i = 0;
    // Increment with carry while keeping the sum bounded.
    while (i < len) {
      if (sum < max_sum) {
        ++k[i];
        ++sum;
        break;
      }
      sum -= k[i];
      k[i] = 0;
      ++i;
    }
    if (i == len) return;
  }
}

}  // namespace

bool DecompositionReport::pass() const {
  return mismatched.empty() && support_collisions.empty() && trichotomy_violations == 0 && negative_valuations == 0 &&
         product_form_failures == 0;
}

nlohmann::json DecompositionReport::to_json() const {
  nlohmann::json mis = nlohmann::json::array();
  for (const auto& m : mismatched) mis.push_back({{"k", m.k}, {"L", m.l_reduced}, {"N", m.n_value}});
  nlohmann::json col = nlohmann::json::array();
  for (const auto& c : support_collisions)
    col.push_back({{"monomial", c.monomial}, {"first", c.first}, {"second", c.second}});
  nlohmann::json byb = nlohmann::json::object();
  for (const auto& [b, cnt] : contributing_by_b) byb[std::to_string(b)] = cnt;
  return {{"max_degree", max_degree},
          {"mode", to_string(mode)},
          {"tuples", tuples},
          {"matched", matched},
          {"zero_nonadmissible", zero_nonadmissible},
          {"mismatched", mis},
          {"support_collisions", col},
          {"contributing_by_b", byb},
          {"trichotomy_violations", trichotomy_violations},
          {"negative_valuations", negative_valuations},
          {"product_form", {{"checked", product_form_checked}, {"failures", product_form_failures}}},
          {"pass", pass()}};
}

DecompositionReport verify_decomposition(const PrimeConfig& cfg, std::uint64_t max_degree, NTermMode mode,
                                         Exec exec) {
  DecompositionReport rep;
  rep.max_degree = max_degree;
  rep.mode = mode;
  DecompositionContext ctx(cfg, exec);
  const std::size_t nl = cfg.n - 2;

  std::unordered_map<Tuple, Contribution, MonoHash> total;
  std::uint64_t pb = 1;
  for (unsigned b = 0;; ++b) {
    if (b > 0) {
      pb *= cfg.p;
      if (pb > max_degree) break;
    }
    for_each_m_tuple(b, cfg, [&](const Tuple& m) {
      if (n_prefactor(m, cfg) == 0) return;
      PolyVector N = n_term(m, ctx, max_degree, mode);
      std::map<Tuple, std::vector<Fp>> terms;
      for (std::size_t j = 0; j < cfg.n; ++j)
        for (const auto& [mono, c] : N[j].terms()) {
          Tuple e(mono.e.begin(), mono.e.begin() + nl);
          auto& v = terms[e];
          v.resize(cfg.n, 0);
          v[j] = c;
        }
      if (terms.empty()) return;
      ++rep.contributing_by_b[b];
      for (auto& [e, v] : terms) {
        auto [it, inserted] = total.try_emplace(e, Contribution{v, m});
        if (!inserted) {
          rep.support_collisions.push_back({e, it->second.owner, m});
          for (std::size_t j = 0; j < cfg.n; ++j) it->second.value[j] = fp::add(it->second.value[j], v[j], cfg.p);
        }
      }
    });
  }

  NegInvQBinomials table(cfg.q, max_degree + cfg.k);
  std::vector<Tuple> tuples;
  for_each_k_tuple(nl, max_degree, [&](const Tuple& k) { tuples.push_back(k); });
  std::sort(tuples.begin(), tuples.end(), [](const Tuple& a, const Tuple& b) {
    auto sa = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
    auto sb = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
    return sa != sb ? sa < sb : a > b;
  });
  rep.tuples = tuples.size();

  struct Row {
    std::vector<Fp> L;
    bool admissible = false;
    int valuation = 0;
    std::vector<Fp> product;
  };
  std::vector<Row> rows(tuples.size());
  std::exception_ptr err;
  const long count = static_cast<long>(tuples.size());
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::Parallel)
  for (long i = 0; i < count; ++i) {
    try {
      auto lc = l_coefficient(tuples[i], cfg, table, true);
      rows[i].L = *lc.reduced;
      rows[i].valuation = lc.p_valuation;
      rows[i].admissible = shift_profile(tuples[i], cfg).admissible;
      if (rows[i].admissible) rows[i].product = product_form(tuples[i], cfg);
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  const std::vector<Fp> zero(cfg.n, 0);
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& row = rows[i];
    if (row.valuation < 0) ++rep.negative_valuations;
    auto it = total.find(tuples[i]);
    const auto& nval = it == total.end() ? zero : it->second.value;
    const bool lzero = row.L == zero;
    if (lzero == row.admissible) ++rep.trichotomy_violations;
    if (row.admissible) {
      ++rep.product_form_checked;
      if (row.product != row.L) ++rep.product_form_failures;
    }
    if (row.L != nval)
      rep.mismatched.push_back({tuples[i], row.L, nval});
    else if (lzero)
      ++rep.zero_nonadmissible;
    else
      ++rep.matched;
  }
  return rep;
}

nlohmann::json to_json(const LCoefficient& c) {
  nlohmann::json vals = nlohmann::json::array();
  for (const auto& v : c.value) vals.push_back(v.str());
  nlohmann::json j{{"k", c.k}, {"value", vals}, {"p_valuation", c.p_valuation}};
  if (c.reduced) j["reduced"] = *c.reduced;
  return j;
}

nlohmann::json to_json(const ShiftProfile& s) {
  nlohmann::json j{{"b", s.b}, {"m", s.m}, {"digits", s.digits}, {"r", s.r}, {"admissible", s.admissible}};
  if (!s.admissible) j["reason"] = s.reason;
  return j;
}

}  // namespace kzmodp
