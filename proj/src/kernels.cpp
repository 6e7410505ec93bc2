#include "kzmodp/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace kzmodp {

void set_num_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int num_threads() { return omp_get_max_threads(); }

FpPoly mul_serial(const FpPoly& a, const FpPoly& b, std::optional<std::uint64_t> max_degree) {
  return mul_truncated(a, b, max_degree);
}

namespace {

FpPoly merge_maps(std::vector<TermMap>& parts, const std::vector<std::string>& vars, std::uint32_t p) {
  std::size_t biggest = 0;
  for (std::size_t i = 1; i < parts.size(); ++i)
    if (parts[i].size() > parts[biggest].size()) biggest = i;
  TermMap acc = std::move(parts[biggest]);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i == biggest) continue;
    for (const auto& [m, c] : parts[i]) {
      auto [it, inserted] = acc.try_emplace(m, c);
      if (!inserted) it->second = fp::add(it->second, c, p);
    }
    TermMap().swap(parts[i]);
  }
  FpPoly out(vars, p);
  out.reserve(acc.size());
  for (const auto& [m, c] : acc)
    if (c != 0) out.set_term(m, c);
  return out;
}

}  // namespace

FpPoly mul_parallel(const FpPoly& a, const FpPoly& b, std::optional<std::uint64_t> max_degree) {
  a.check_compatible(b);
  const std::uint32_t p = a.p();
  const FpPoly& outer = a.size() >= b.size() ? a : b;
  const FpPoly& inner = a.size() >= b.size() ? b : a;
  std::vector<Term> ot(outer.terms().begin(), outer.terms().end());
  std::vector<std::pair<Term, std::uint64_t>> it_terms;
  it_terms.reserve(inner.size());
  for (const auto& t : inner.terms()) it_terms.push_back({t, t.first.degree()});
  int nt = std::max(1, omp_get_max_threads());
  std::vector<TermMap> parts(static_cast<std::size_t>(nt));
#pragma omp parallel num_threads(nt)
  {
    TermMap& local = parts[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(ot.size()); ++i) {
      const auto& [ma, ca] = ot[static_cast<std::size_t>(i)];
      std::uint64_t da = ma.degree();
      for (const auto& [t, db] : it_terms) {
        if (max_degree && da + db > *max_degree) continue;
        Fp c = fp::mul(ca, t.second, p);
        auto [pos, inserted] = local.try_emplace(ma * t.first, c);
        if (!inserted) pos->second = fp::add(pos->second, c, p);
      }
    }
  }
  return merge_maps(parts, a.vars(), p);
}

FpPoly mul(const FpPoly& a, const FpPoly& b, Exec exec, std::optional<std::uint64_t> max_degree) {
  return exec == Exec::Parallel ? mul_parallel(a, b, max_degree) : mul_serial(a, b, max_degree);
}

namespace {

struct PreparedFactor {
  std::optional<std::size_t> var;
  std::uint64_t max_l = 0;  // largest usable exponent of the root
  std::vector<Fp> weight;   // binom(mult, l) * root^l, zero where pruned
};

struct Extractor {
  std::vector<PreparedFactor> fs;
  std::vector<std::uint64_t> suffix;  // sum of max_l over fs[i..]
  std::uint32_t p;

  void run(std::size_t i, std::uint64_t remaining, Monomial& mono, Fp coef, TermMap& out) const {
    if (i == fs.size()) {
      if (remaining == 0) {
        auto [it, inserted] = out.try_emplace(mono, coef);
        if (!inserted) it->second = fp::add(it->second, coef, p);
      }
      return;
    }
    const auto& f = fs[i];
    std::uint64_t lo = remaining > suffix[i + 1] ? remaining - suffix[i + 1] : 0;
    std::uint64_t hi = std::min(f.max_l, remaining);
    for (std::uint64_t l = lo; l <= hi; ++l) {
      Fp w = f.weight[l];
      if (w == 0) continue;
      if (f.var) mono[*f.var] += static_cast<std::uint32_t>(l);
      run(i + 1, remaining - l, mono, fp::mul(coef, w, p), out);
      if (f.var) mono[*f.var] -= static_cast<std::uint32_t>(l);
    }
  }
};

// Sum of l over all factors must equal T = shift + sum(mult) - w.
std::optional<std::uint64_t> target_sum(const std::vector<LinearFactor>& factors, std::uint64_t shift, std::uint64_t w) {
  std::uint64_t total = shift;
  for (const auto& f : factors) total += f.mult;
  if (w > total) return std::nullopt;
  std::uint64_t t = total - w;
  std::uint64_t cap = 0;
  for (const auto& f : factors) cap += f.mult;
  if (t > cap) return std::nullopt;
  return t;
}

}  // namespace

std::uint64_t linear_product_work(const std::vector<LinearFactor>& factors, std::uint64_t shift, std::uint64_t w) {
  auto t = target_sum(factors, shift, w);
  if (!t) return 0;
  // Count compositions of T with bounded parts by dynamic programming.
  std::vector<std::uint64_t> ways(*t + 1, 0);
  ways[0] = 1;
  for (const auto& f : factors) {
    std::uint64_t cap = (f.var || f.root != 0) ? f.mult : 0;
    std::vector<std::uint64_t> next(*t + 1, 0);
    for (std::uint64_t s = 0; s <= *t; ++s) {
      if (ways[s] == 0) continue;
      for (std::uint64_t l = 0; l <= cap && s + l <= *t; ++l) next[s + l] += ways[s];
    }
    ways.swap(next);
  }
  return ways[*t];
}

FpPoly linear_product_coefficient(const std::vector<LinearFactor>& factors, std::uint64_t shift, std::uint64_t w,
                                  const std::vector<std::string>& vars, std::uint32_t p, Exec exec) {
  FpPoly zero(vars, p);
  auto target = target_sum(factors, shift, w);
  if (!target) return zero;
  Extractor ex;
  ex.p = p;
  for (const auto& f : factors) {
    if (f.var && *f.var >= vars.size()) throw std::invalid_argument("linear factor variable out of range");
    PreparedFactor pf;
    pf.var = f.var;
    pf.max_l = (f.var || f.root % p != 0) ? f.mult : 0;
    pf.weight.resize(pf.max_l + 1);
    Fp rp = 1;
    for (std::uint64_t l = 0; l <= pf.max_l; ++l) {
      Fp b = fp::binom(f.mult, l, p);
      pf.weight[l] = f.var ? b : fp::mul(b, rp, p);
      rp = fp::mul(rp, f.root % p, p);
    }
    ex.fs.push_back(std::move(pf));
  }
  // Constant factors first keeps the variable-carrying recursion innermost,
  // and the widest variable factor is the natural parallel split.
  std::stable_sort(ex.fs.begin(), ex.fs.end(),
                   [](const PreparedFactor& a, const PreparedFactor& b) { return !a.var && b.var; });
  ex.suffix.assign(ex.fs.size() + 1, 0);
  for (std::size_t i = ex.fs.size(); i-- > 0;) ex.suffix[i] = ex.suffix[i + 1] + ex.fs[i].max_l;
  if (*target > ex.suffix[0]) return zero;
  const Fp sign = fp::sign(*target, p);

  if (exec == Exec::Serial || ex.fs.empty()) {
    TermMap out;
    Monomial mono;
    ex.run(0, *target, mono, sign, out);
    std::vector<TermMap> parts{std::move(out)};
    return merge_maps(parts, vars, p);
  }

  // Split on the first two levels to get enough independent tasks.
  struct Task {
    std::uint64_t l0, l1;
  };
  std::vector<Task> tasks;
  const std::size_t depth = std::min<std::size_t>(2, ex.fs.size());
  {
    const auto& f0 = ex.fs[0];
    std::uint64_t lo0 = *target > ex.suffix[1] ? *target - ex.suffix[1] : 0;
    for (std::uint64_t l0 = lo0; l0 <= std::min(f0.max_l, *target); ++l0) {
      if (f0.weight[l0] == 0) continue;
      if (depth == 1) {
        tasks.push_back({l0, 0});
        continue;
      }
      std::uint64_t rem = *target - l0;
      const auto& f1 = ex.fs[1];
      std::uint64_t lo1 = rem > ex.suffix[2] ? rem - ex.suffix[2] : 0;
      for (std::uint64_t l1 = lo1; l1 <= std::min(f1.max_l, rem); ++l1)
        if (f1.weight[l1] != 0) tasks.push_back({l0, l1});
    }
  }
  int nt = std::max(1, omp_get_max_threads());
  std::vector<TermMap> parts(static_cast<std::size_t>(nt));
#pragma omp parallel num_threads(nt)
  {
    TermMap& local = parts[static_cast<std::size_t>(omp_get_thread_num())];
    Monomial mono;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(tasks.size()); ++ti) {
      const Task& t = tasks[static_cast<std::size_t>(ti)];
      Fp coef = fp::mul(sign, ex.fs[0].weight[t.l0], p);
      if (ex.fs[0].var) mono[*ex.fs[0].var] += static_cast<std::uint32_t>(t.l0);
      std::uint64_t rem = *target - t.l0;
      if (depth == 2) {
        coef = fp::mul(coef, ex.fs[1].weight[t.l1], p);
        if (ex.fs[1].var) mono[*ex.fs[1].var] += static_cast<std::uint32_t>(t.l1);
        rem -= t.l1;
      }
      ex.run(depth, rem, mono, coef, local);
      if (ex.fs[0].var) mono[*ex.fs[0].var] -= static_cast<std::uint32_t>(t.l0);
      if (depth == 2 && ex.fs[1].var) mono[*ex.fs[1].var] -= static_cast<std::uint32_t>(t.l1);
    }
  }
  return merge_maps(parts, vars, p);
}

}  // namespace kzmodp
