#include "kzmodp/poly.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kzmodp {

std::uint64_t Monomial::degree() const {
  std::uint64_t d = 0;
  for (auto x : e) d += x;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    std::uint64_t s = static_cast<std::uint64_t>(e[i]) + o.e[i];
    if (s > std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("monomial exponent overflow");
    r.e[i] = static_cast<std::uint32_t>(s);
  }
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (e[i] > o.e[i]) return false;
  return true;
}

Monomial Monomial::quotient(const Monomial& o) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = e[i] - o.e[i];
  return r;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < kMaxVars; i += 2) {
    std::uint64_t w = (static_cast<std::uint64_t>(m.e[i]) << 32) | m.e[i + 1];
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ull;
  }
  h ^= h >> 29;
  return static_cast<std::size_t>(h);
}

bool graded_lex_less(const Monomial& a, const Monomial& b) {
  auto da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  return a.e < b.e;
}

FpPoly::FpPoly(std::vector<std::string> vars, std::uint32_t p) : vars_(std::move(vars)), p_(p) {
  if (vars_.size() > kMaxVars) throw std::invalid_argument("too many variables (max " + std::to_string(kMaxVars) + ")");
  if (p_ < 2) throw std::invalid_argument("modulus must be >= 2");
}

FpPoly FpPoly::constant(std::vector<std::string> vars, std::uint32_t p, Fp c) {
  FpPoly f(std::move(vars), p);
  f.add_term(Monomial{}, c % p);
  return f;
}

FpPoly FpPoly::variable(std::vector<std::string> vars, std::uint32_t p, std::size_t index) {
  FpPoly f(std::move(vars), p);
  if (index >= f.nvars()) throw std::out_of_range("variable index");
  Monomial m;
  m[index] = 1;
  f.add_term(m, 1);
  return f;
}

FpPoly FpPoly::monomial(std::vector<std::string> vars, std::uint32_t p, const Monomial& m, Fp c) {
  FpPoly f(std::move(vars), p);
  f.add_term(m, c % p);
  return f;
}

std::size_t FpPoly::var_index(const std::string& name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) throw std::invalid_argument("unknown variable: " + name);
  return static_cast<std::size_t>(it - vars_.begin());
}

bool FpPoly::has_var(const std::string& name) const {
  return std::find(vars_.begin(), vars_.end(), name) != vars_.end();
}

Fp FpPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

void FpPoly::add_term(const Monomial& m, Fp c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = fp::add(it->second, c, p_);
    if (it->second == 0) terms_.erase(it);
  }
}

void FpPoly::set_term(const Monomial& m, Fp c) {
  if (c % p_ == 0)
    terms_.erase(m);
  else
    terms_[m] = c % p_;
}

std::int64_t FpPoly::total_degree() const {
  std::int64_t d = kDegreeOfZero;
  for (const auto& [m, c] : terms_) d = std::max<std::int64_t>(d, static_cast<std::int64_t>(m.degree()));
  return d;
}

std::vector<Term> FpPoly::sorted_terms() const {
  std::vector<Term> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return graded_lex_less(b.first, a.first); });
  return out;
}

void FpPoly::check_compatible(const FpPoly& o) const {
  if (p_ != o.p_) throw std::invalid_argument("modulus mismatch");
  if (vars_ != o.vars_) throw std::invalid_argument("variable list mismatch");
}

FpPoly& FpPoly::operator+=(const FpPoly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

FpPoly& FpPoly::operator-=(const FpPoly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, fp::neg(c, p_));
  return *this;
}

FpPoly& FpPoly::scale(Fp c) {
  c %= p_;
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v = fp::mul(v, c, p_);
  return *this;
}

FpPoly FpPoly::operator-() const {
  FpPoly r = *this;
  for (auto& [m, v] : r.terms_) v = fp::neg(v, p_);
  return r;
}

bool FpPoly::operator==(const FpPoly& o) const {
  return p_ == o.p_ && vars_ == o.vars_ && terms_ == o.terms_;
}

FpPoly operator+(FpPoly a, const FpPoly& b) { return a += b; }
FpPoly operator-(FpPoly a, const FpPoly& b) { return a -= b; }
FpPoly operator*(Fp c, FpPoly a) { return a.scale(c); }

FpPoly mul_truncated(const FpPoly& a, const FpPoly& b, std::optional<std::uint64_t> max_degree) {
  a.check_compatible(b);
  const std::uint32_t p = a.p();
  TermMap acc;
  acc.reserve(std::min<std::size_t>(a.size() * b.size(), 4 * (a.size() + b.size()) + 16));
  std::vector<std::pair<Term, std::uint64_t>> bt;
  bt.reserve(b.size());
  for (const auto& t : b.terms()) bt.push_back({t, t.first.degree()});
  for (const auto& [ma, ca] : a.terms()) {
    std::uint64_t da = ma.degree();
    for (const auto& [t, db] : bt) {
      if (max_degree && da + db > *max_degree) continue;
      Fp c = fp::mul(ca, t.second, p);
      auto [it, inserted] = acc.try_emplace(ma * t.first, c);
      if (!inserted) it->second = fp::add(it->second, c, p);
    }
  }
  FpPoly out(a.vars(), p);
  out.reserve(acc.size());
  for (const auto& [m, c] : acc)
    if (c != 0) out.set_term(m, c);
  return out;
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) { return mul_truncated(a, b, std::nullopt); }

FpPoly pow(const FpPoly& base, std::uint64_t e) {
  FpPoly result = FpPoly::constant(base.vars(), base.p(), 1);
  FpPoly b = base;
  while (e > 0) {
    if (e & 1u) result = result * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return result;
}

FpPoly partial_derivative(const FpPoly& f, std::size_t var) {
  if (var >= f.nvars()) throw std::invalid_argument("partial_derivative: unknown variable");
  FpPoly out(f.vars(), f.p());
  for (const auto& [m, c] : f.terms()) {
    if (m[var] == 0) continue;
    Fp factor = fp::from_uint(m[var], f.p());
    if (factor == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    out.add_term(d, fp::mul(c, factor, f.p()));
  }
  return out;
}

FpPoly partial_derivative(const FpPoly& f, const std::string& var) { return partial_derivative(f, f.var_index(var)); }

namespace {

std::vector<std::string> without(const std::vector<std::string>& vars, std::size_t idx) {
  std::vector<std::string> r;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (i != idx) r.push_back(vars[i]);
  return r;
}

}  // namespace

XSeries expand_in_x(const FpPoly& f, const std::string& x) {
  std::size_t xi = f.var_index(x);
  auto rest = without(f.vars(), xi);
  XSeries s;
  s.x = x;
  std::uint32_t maxe = 0;
  for (const auto& [m, c] : f.terms()) maxe = std::max(maxe, m[xi]);
  s.coeffs.assign(static_cast<std::size_t>(maxe) + 1, FpPoly(rest, f.p()));
  for (const auto& [m, c] : f.terms()) {
    Monomial r;
    for (std::size_t i = 0, j = 0; i < f.nvars(); ++i)
      if (i != xi) r[j++] = m[i];
    s.coeffs[m[xi]].add_term(r, c);
  }
  return s;
}

FpPoly assemble(const XSeries& s, const std::vector<std::string>& vars) {
  auto it = std::find(vars.begin(), vars.end(), s.x);
  if (it == vars.end()) throw std::invalid_argument("assemble: x not among vars");
  std::size_t xi = static_cast<std::size_t>(it - vars.begin());
  if (s.coeffs.empty()) throw std::invalid_argument("assemble: empty series");
  FpPoly out(vars, s.coeffs.front().p());
  auto rest = without(vars, xi);
  for (std::size_t w = 0; w < s.coeffs.size(); ++w) {
    if (s.coeffs[w].vars() != rest) throw std::invalid_argument("assemble: coefficient variables mismatch");
    for (const auto& [r, c] : s.coeffs[w].terms()) {
      Monomial m;
      for (std::size_t i = 0, j = 0; i < vars.size(); ++i) m[i] = (i == xi) ? static_cast<std::uint32_t>(w) : r[j++];
      out.add_term(m, c);
    }
  }
  return out;
}

FpPoly substitute(const FpPoly& f, const std::map<std::string, FpPoly>& assignments,
                  const std::vector<std::string>& target_vars) {
  for (const auto& [name, g] : assignments) {
    if (!f.has_var(name)) throw std::invalid_argument("substitute: unknown variable " + name);
    if (g.vars() != target_vars || g.p() != f.p()) throw std::invalid_argument("substitute: assignment not over target vars");
  }
  std::vector<FpPoly> images;
  for (const auto& v : f.vars()) {
    auto it = assignments.find(v);
    if (it != assignments.end()) {
      images.push_back(it->second);
    } else {
      auto jt = std::find(target_vars.begin(), target_vars.end(), v);
      if (jt == target_vars.end()) throw std::invalid_argument("substitute: variable " + v + " has no image");
      images.push_back(FpPoly::variable(target_vars, f.p(), static_cast<std::size_t>(jt - target_vars.begin())));
    }
  }
  std::vector<std::vector<FpPoly>> powers(images.size());
  auto power = [&](std::size_t i, std::uint32_t e) -> const FpPoly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(FpPoly::constant(target_vars, f.p(), 1));
    while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
    return cache[e];
  };
  FpPoly out(target_vars, f.p());
  for (const auto& [m, c] : f.sorted_terms()) {
    FpPoly t = FpPoly::constant(target_vars, f.p(), c);
    for (std::size_t i = 0; i < f.nvars(); ++i)
      if (m[i] > 0) t = t * power(i, m[i]);
    out += t;
  }
  return out;
}

FpPoly map_variables(const FpPoly& f, const std::vector<std::string>& target_vars,
                     const std::vector<std::size_t>& mapping) {
  if (mapping.size() != f.nvars()) throw std::invalid_argument("map_variables: mapping size");
  for (auto t : mapping)
    if (t >= target_vars.size()) throw std::invalid_argument("map_variables: target index out of range");
  FpPoly out(target_vars, f.p());
  for (const auto& [m, c] : f.terms()) {
    Monomial r;
    for (std::size_t i = 0; i < f.nvars(); ++i) r[mapping[i]] += m[i];
    out.add_term(r, c);
  }
  return out;
}

FpPoly shift_variables(const FpPoly& f, std::size_t base, const std::vector<std::size_t>& shifted) {
  if (base >= f.nvars()) throw std::invalid_argument("shift_variables: base index");
  for (auto s : shifted)
    if (s >= f.nvars() || s == base) throw std::invalid_argument("shift_variables: bad shifted index");
  const std::uint32_t p = f.p();
  std::uint64_t maxe = 0;
  for (const auto& [m, c] : f.terms())
    for (auto s : shifted) maxe = std::max<std::uint64_t>(maxe, m[s]);
  BinomialTable binom(p, maxe);
  // One variable at a time: intermediate results merge like terms early.
  FpPoly cur = f;
  for (auto v : shifted) {
    TermMap acc;
    acc.reserve(cur.size() * 2);
    for (const auto& [m, c] : cur.terms()) {
      std::uint32_t e = m[v];
      Monomial t = m;
      for (std::uint32_t r = 0; r <= e; ++r) {
        Fp b = binom(e, r);
        if (b == 0) continue;
        t[v] = e - r;
        t[base] = m[base] + r;
        Fp coef = fp::mul(c, (r & 1u) ? fp::neg(b, p) : b, p);
        auto [it, inserted] = acc.try_emplace(t, coef);
        if (!inserted) it->second = fp::add(it->second, coef, p);
      }
    }
    FpPoly next(f.vars(), p);
    next.reserve(acc.size());
    for (const auto& [m, c] : acc)
      if (c != 0) next.set_term(m, c);
    cur = std::move(next);
  }
  return cur;
}

std::optional<std::int64_t> is_homogeneous(const FpPoly& f) {
  if (f.is_zero()) return kDegreeOfZero;
  std::optional<std::uint64_t> d;
  for (const auto& [m, c] : f.terms()) {
    auto md = m.degree();
    if (!d)
      d = md;
    else if (*d != md)
      return std::nullopt;
  }
  return static_cast<std::int64_t>(*d);
}

FpPoly frobenius(const FpPoly& f, unsigned s) {
  std::uint64_t factor = 1;
  for (unsigned i = 0; i < s; ++i) factor *= f.p();
  FpPoly out(f.vars(), f.p());
  out.reserve(f.size());
  for (const auto& [m, c] : f.terms()) {
    Monomial r;
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      std::uint64_t e = m[i] * factor;
      if (e > std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("frobenius: exponent overflow");
      r[i] = static_cast<std::uint32_t>(e);
    }
    out.set_term(r, c);
  }
  return out;
}

FpPoly truncate_degree(const FpPoly& f, std::uint64_t max_degree) {
  FpPoly out(f.vars(), f.p());
  for (const auto& [m, c] : f.terms())
    if (m.degree() <= max_degree) out.set_term(m, c);
  return out;
}

std::optional<FpPoly> divide_exact(const FpPoly& f, const FpPoly& g) {
  f.check_compatible(g);
  if (g.is_zero()) throw std::domain_error("divide_exact: division by zero");
  const std::uint32_t p = f.p();
  auto gt = g.sorted_terms();
  const Monomial& lead = gt.front().first;
  Fp lead_inv = fp::inv(gt.front().second, p);
  std::map<Monomial, Fp, GradedLexGreater> rem(f.terms().begin(), f.terms().end());
  FpPoly quot(f.vars(), p);
  while (!rem.empty()) {
    auto [m, c] = *rem.begin();
    if (!lead.divides(m)) return std::nullopt;
    Monomial qm = m.quotient(lead);
    Fp qc = fp::mul(c, lead_inv, p);
    quot.add_term(qm, qc);
    for (const auto& [gm, gc] : gt) {
      Monomial t = qm * gm;
      Fp sub = fp::mul(qc, gc, p);
      auto it = rem.find(t);
      if (it == rem.end()) {
        rem.emplace(t, fp::neg(sub, p));
      } else {
        it->second = fp::sub(it->second, sub, p);
        if (it->second == 0) rem.erase(it);
      }
    }
  }
  return quot;
}

std::string to_string(const FpPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : f.sorted_terms()) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      if (m[i] == 0) continue;
      os << '*' << f.vars()[i];
      if (m[i] > 1) os << '^' << m[i];
    }
  }
  return os.str();
}

BinomialTable::BinomialTable(std::uint32_t p, std::uint64_t max_row) : rows_(max_row + 1) {
  for (std::uint64_t r = 0; r <= max_row; ++r) {
    rows_[r].assign(r + 1, 1 % p);
    for (std::uint64_t j = 1; j < r; ++j) rows_[r][j] = fp::add(rows_[r - 1][j - 1], rows_[r - 1][j], p);
  }
}

}  // namespace kzmodp
