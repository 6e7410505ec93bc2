#include "kzmodp/cartier.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <omp.h>

namespace kzmodp {

std::string to_string(CurveType c) {
  switch (c) {
    case CurveType::X:
      return "x";
    case CurveType::XTilde:
      return "xtilde";
    case CurveType::Y:
      return "y";
  }
  return "?";
}

std::uint32_t CurveSpec::degree() const { return std::accumulate(weights.begin(), weights.end(), 0u); }

CurveSpec curve_X(const PrimeConfig& cfg) { return {CurveType::X, cfg.q, unit_weights(cfg), z_vars(cfg.n)}; }

CurveSpec curve_XTilde(const PrimeConfig& cfg, const Weights& fused) {
  validate_weights(fused, cfg);
  CurveSpec c{CurveType::XTilde, cfg.q, fused, z_vars(fused.size())};
  if (c.degree() != cfg.n) throw ConfigError("fused weights must sum to n");
  return c;
}

CurveSpec curve_Y(const PrimeConfig& cfg) { return {CurveType::Y, cfg.q, unit_weights(cfg), lambda_vars(cfg.n)}; }

std::vector<LinearFactor> branch_factors(const CurveSpec& curve, std::uint64_t E, std::uint64_t& shift,
                                         std::optional<std::size_t> drop) {
  std::vector<LinearFactor> fs;
  for (std::size_t j = 0; j < curve.weights.size(); ++j) {
    std::uint64_t mult = static_cast<std::uint64_t>(curve.weights[j]) * E;
    if (drop && *drop == j) {
      if (mult == 0) throw std::invalid_argument("branch_factors: cannot lower a zero multiplicity");
      --mult;
    }
    if (curve.type != CurveType::Y)
      fs.push_back(LinearFactor::of_var(j, mult));
    else if (j == 0)
      shift += mult;
    else if (j == 1)
      fs.push_back(LinearFactor::of_const(1, mult));
    else
      fs.push_back(LinearFactor::of_var(j - 2, mult));
  }
  return fs;
}

FpPoly branch_polynomial(const CurveSpec& curve, std::uint32_t p) {
  std::vector<std::string> vars{"x"};
  vars.insert(vars.end(), curve.vars.begin(), curve.vars.end());
  const FpPoly x = FpPoly::variable(vars, p, 0);
  FpPoly out = FpPoly::constant(vars, p, 1);
  for (std::size_t j = 0; j < curve.weights.size(); ++j) {
    FpPoly lin = x;
    if (curve.type != CurveType::Y)
      lin -= FpPoly::variable(vars, p, j + 1);
    else if (j == 1)
      lin -= FpPoly::constant(vars, p, 1);
    else if (j >= 2)
      lin -= FpPoly::variable(vars, p, j - 1);
    out = out * pow(lin, curve.weights[j]);
  }
  return out;
}

Vanishing e_vanishing(const Weights& w, std::uint32_t a, std::uint32_t q) {
  if (a < 1 || a >= q) throw std::invalid_argument("e_vanishing: a out of range");
  Vanishing v;
  for (auto x : w) {
    // ceil((x a + 1)/q - 1) == floor(x a / q) since q does not divide x a.
    std::uint32_t e = x * a / q;
    v.e.push_back(e);
    v.total += e;
  }
  return v;
}

DifferentialBasis differential_basis(const CurveSpec& curve, std::uint32_t a, const PrimeConfig& cfg) {
  DifferentialBasis d;
  d.a = a;
  d.vanishing = e_vanishing(curve.weights, a, cfg.q);
  const std::uint32_t top = a * cfg.k;
  for (std::uint32_t i = 0; i < top; ++i) d.exponents.push_back(i);
  d.dim = top - d.vanishing.total;
  return d;
}

std::uint64_t hw_exponent(std::uint32_t a, const PrimeConfig& cfg) {
  if (a < 1 || a >= cfg.q) throw std::invalid_argument("eigen-index out of range");
  return (static_cast<std::uint64_t>(eta(a, cfg)) * cfg.p - a) / cfg.q;
}

std::int64_t hw_entry_degree(std::uint32_t a, std::uint64_t f, std::uint64_t h, const PrimeConfig& cfg) {
  return static_cast<std::int64_t>(hw_exponent(a, cfg)) - static_cast<std::int64_t>(f - 1) +
         static_cast<std::int64_t>((h - 1) * cfg.p);
}

namespace {

void check_entry_index(std::uint32_t a, std::uint64_t f, std::uint64_t h, const PrimeConfig& cfg) {
  if (f < 1 || f > static_cast<std::uint64_t>(a) * cfg.k) throw std::out_of_range("row index f out of range");
  if (h < 1 || h > static_cast<std::uint64_t>(eta(a, cfg)) * cfg.k) throw std::out_of_range("column index h out of range");
}

std::uint64_t extraction_power(std::uint32_t a, std::uint64_t h, const PrimeConfig& cfg) {
  return (static_cast<std::uint64_t>(eta(a, cfg)) * cfg.k - h) * cfg.p + cfg.p - 1;
}

}  // namespace

HasseWittBlock cartier_block(std::uint32_t a, const CurveSpec& curve, const PrimeConfig& cfg, Exec exec) {
  HasseWittBlock blk;
  blk.a = a;
  blk.eta_a = eta(a, cfg);
  blk.rows = static_cast<std::size_t>(a) * cfg.k;
  blk.cols = static_cast<std::size_t>(blk.eta_a) * cfg.k;
  const std::uint64_t E = hw_exponent(a, cfg);
  blk.entries.resize(blk.rows);
  for (std::uint64_t f = 1; f <= blk.rows; ++f) {
    std::uint64_t shift = blk.rows - f;
    auto fs = branch_factors(curve, E, shift);
    for (std::uint64_t h = 1; h <= blk.cols; ++h)
      blk.entries[f - 1].push_back(
          linear_product_coefficient(fs, shift, extraction_power(a, h, cfg), curve.vars, cfg.p, exec));
  }
  return blk;
}

FpPoly cartier_entry_by_power(std::uint32_t a, std::uint64_t f, std::uint64_t h, const CurveSpec& curve,
                              const PrimeConfig& cfg) {
  check_entry_index(a, f, h, cfg);
  FpPoly B = branch_polynomial(curve, cfg.p);
  FpPoly power = pow(B, hw_exponent(a, cfg));
  const std::uint64_t shift = static_cast<std::uint64_t>(a) * cfg.k - f;
  const std::uint64_t w = extraction_power(a, h, cfg);
  if (w < shift) return FpPoly(curve.vars, cfg.p);
  XSeries s = expand_in_x(power, "x");
  if (w - shift >= s.coeffs.size()) return FpPoly(curve.vars, cfg.p);
  return s.coeffs[w - shift];
}

Fp hw_closed_form_term(std::uint32_t a, std::uint64_t f, std::uint64_t h, const std::vector<std::uint64_t>& l,
                       const PrimeConfig& cfg) {
  const std::uint32_t p = cfg.p;
  const std::uint64_t E = hw_exponent(a, cfg);
  std::uint64_t S = 0;
  for (auto x : l) {
    if (x > E) return 0;
    S += x;
  }
  std::int64_t t = static_cast<std::int64_t>(S + f - 1) - static_cast<std::int64_t>((h - 1) * p);
  if (t < 0 || t > static_cast<std::int64_t>(E)) return 0;
  Fp c = fp::mul(fp::sign(E - (f - 1) + (h - 1) * p, p), fp::binom(E, static_cast<std::uint64_t>(t), p), p);
  for (auto x : l) c = fp::mul(c, fp::binom(E, x, p), p);
  return c;
}

FpPoly hw_closed_form(std::uint32_t a, std::uint64_t f, std::uint64_t h, const PrimeConfig& cfg) {
  check_entry_index(a, f, h, cfg);
  const std::size_t nl = cfg.n - 2;
  const std::uint64_t E = hw_exponent(a, cfg);
  FpPoly out(lambda_vars(cfg.n), cfg.p);
  std::vector<std::uint64_t> l(nl, 0);
  Monomial mono;
  while (true) {
    Fp c = hw_closed_form_term(a, f, h, l, cfg);
    if (c != 0) {
      for (std::size_t i = 0; i < nl; ++i) mono[i] = static_cast<std::uint32_t>(l[i]);
      out.add_term(mono, c);
    }
    std::size_t i = 0;
    while (i < nl && l[i] == E) l[i++] = 0;
    if (i == nl) break;
    ++l[i];
  }
  return out;
}

HasseWittMatrix::HasseWittMatrix(CurveSpec curve, PrimeConfig cfg, Exec exec)
    : curve_(std::move(curve)), cfg_(std::move(cfg)), exec_(exec) {}

const HasseWittBlock& HasseWittMatrix::block(std::uint32_t a) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(a);
    if (it != cache_.end()) return *it->second;
  }
  auto blk = std::make_shared<const HasseWittBlock>(cartier_block(a, curve_, cfg_, exec_));
  std::lock_guard<std::mutex> lock(mu_);
  return *cache_.try_emplace(a, std::move(blk)).first->second;
}

std::size_t HasseWittMatrix::genus() const {
  std::size_t g = 0;
  for (std::uint32_t a = 1; a < cfg_.q; ++a) g += differential_basis(curve_, a, cfg_).dim;
  return g;
}

std::vector<std::vector<FpPoly>> HasseWittMatrix::full() const {
  const std::uint32_t q = cfg_.q;
  std::vector<std::size_t> offset(q + 1, 0);
  for (std::uint32_t a = 1; a < q; ++a) offset[a + 1] = offset[a] + static_cast<std::size_t>(a) * cfg_.k;
  const std::size_t dim = offset[q];
  std::vector<std::vector<FpPoly>> out(dim, std::vector<FpPoly>(dim, FpPoly(curve_.vars, cfg_.p)));
  for (std::uint32_t a = 1; a < q; ++a) {
    const auto& blk = block(a);
    for (std::size_t f = 0; f < blk.rows; ++f)
      for (std::size_t h = 0; h < blk.cols; ++h) out[offset[a] + f][offset[blk.eta_a] + h] = blk.entries[f][h];
  }
  return out;
}

std::vector<HasseWittBlock> hasse_witt_blocks(const CurveSpec& curve, const PrimeConfig& cfg) {
  const int count = static_cast<int>(cfg.q) - 1;
  std::vector<HasseWittBlock> out(count);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) {
    try {
      out[i] = cartier_block(static_cast<std::uint32_t>(i + 1), curve, cfg, Exec::Serial);
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

CartierHat cartier_hat(const CurveSpec& curve, const PrimeConfig& cfg, Exec exec) {
  if (curve.type == CurveType::Y) throw std::invalid_argument("cartier_hat: needs a z-parameter curve");
  CartierHat hat;
  hat.curve = curve;
  for (auto w : curve.weights) hat.M.push_back(static_cast<std::uint64_t>(w) * cfg.mbar());
  const std::uint64_t top = static_cast<std::uint64_t>(cfg.a1()) * cfg.k;
  ExponentVectorM M{hat.M, false};
  for (std::uint64_t m = 1; m <= top; ++m) {
    CartierHatRow row;
    row.m = m;
    row.x_power = top - m;
    row.vec = arithmetic_vector(M, (top - m) * cfg.p + cfg.p - 1, cfg.p, exec);
    hat.rows.push_back(std::move(row));
  }
  return hat;
}

namespace {

// Divides c_0 + c_1 x + ... by (x - r); returns nullopt on a nonzero remainder.
std::optional<std::vector<FpPoly>> synthetic_divide(const std::vector<FpPoly>& c, const FpPoly& r) {
  if (c.empty()) return c;
  const std::size_t D = c.size() - 1;
  if (D == 0) {
    if (c[0].is_zero()) return c;
    return std::nullopt;
  }
  std::vector<FpPoly> quo(D, FpPoly(r.vars(), r.p()));
  quo[D - 1] = c[D];
  for (std::size_t i = D - 1; i >= 1; --i) quo[i - 1] = c[i] + r * quo[i];
  FpPoly rem = c[0] + r * quo[0];
  if (!rem.is_zero()) return std::nullopt;
  return quo;
}

}  // namespace

RegularityReport check_regularity(const CartierHat& hat, const PrimeConfig& cfg) {
  RegularityReport rep;
  const auto van = e_vanishing(hat.curve.weights, cfg.a1(), cfg.q);
  rep.required = van.e;
  const std::size_t roots = hat.curve.weights.size();
  const std::size_t coords = hat.rows.empty() ? 0 : hat.rows.front().vec.size();
  const auto& vars = hat.curve.vars;
  const std::uint64_t top = static_cast<std::uint64_t>(cfg.a1()) * cfg.k;
  for (std::size_t j = 0; j < coords; ++j) {
    std::vector<FpPoly> u(top, FpPoly(vars, cfg.p));
    for (const auto& row : hat.rows) u[row.x_power] = row.vec[j];
    std::vector<std::uint32_t> order(roots, 0);
    for (std::size_t i = 0; i < roots; ++i) {
      Monomial zm;
      zm[i] = cfg.p;
      FpPoly r = FpPoly::monomial(vars, cfg.p, zm, 1);
      auto cur = u;
      while (order[i] < rep.required[i]) {
        auto next = synthetic_divide(cur, r);
        if (!next) break;
        cur = std::move(*next);
        ++order[i];
      }
      if (order[i] < rep.required[i] && rep.pass) {
        rep.pass = false;
        rep.message = "coordinate " + std::to_string(j + 1) + " vanishes to order " + std::to_string(order[i]) +
                      " < " + std::to_string(rep.required[i]) + " at root " + std::to_string(i + 1);
      }
    }
    rep.order.push_back(std::move(order));
  }
  return rep;
}

FpPoly IteratedSolution::coordinate(std::size_t j, Exec exec) const {
  if (!basis) throw std::logic_error("iterated solution has no basis attached");
  FpPoly out(basis->members.front().vec.front().vars(), basis->cfg.p);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    out += mul(coeffs[i], basis->members[i].vec[j], exec);
  }
  return out;
}

PolyVector IteratedSolution::expand(Exec exec) const {
  PolyVector out;
  for (std::size_t j = 0; j < basis->cfg.n; ++j) out.push_back(coordinate(j, exec));
  return out;
}

IteratedKzReport verify_iterated(const IteratedSolution& s, std::uint64_t expand_limit) {
  if (!s.basis) throw std::logic_error("iterated solution has no basis attached");
  const auto& cfg = s.basis->cfg;
  IteratedKzReport rep;
  rep.coefficients_in_frobenius_image = true;
  for (const auto& c : s.coeffs)
    for (const auto& [mono, unused] : c.terms())
      for (std::size_t i = 0; i < c.nvars(); ++i)
        if (mono[i] % cfg.p != 0) rep.coefficients_in_frobenius_image = false;
  for (std::size_t j = 0; j < cfg.n; ++j) {
    std::uint64_t est = 0;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
      est += static_cast<std::uint64_t>(s.coeffs[i].size()) * s.basis->members[i].vec[j].size();
    rep.estimated_terms = std::max(rep.estimated_terms, est);
  }
  const Weights& w = s.basis->lambda;
  if (rep.estimated_terms <= expand_limit) {
    rep.expanded = true;
    rep.method = "expanded";
    rep.kz = verify_kz_lazy(
        cfg.n, [&](std::size_t j) { return s.coordinate(j); }, w, cfg);
  } else {
    rep.method = "linearity";
    for (std::size_t i = 0; i < s.coeffs.size() && rep.kz.pass; ++i)
      if (!s.coeffs[i].is_zero()) rep.kz = verify_kz(s.basis->members[i].vec, w, cfg);
  }
  rep.pass = rep.coefficients_in_frobenius_image && rep.kz.pass;
  return rep;
}

IteratedSolution iterated_solution(unsigned b, std::uint64_t m, const PrimeConfig& cfg, const HasseWittMatrix& hw,
                                   const SolutionBasis& basis, Exec exec) {
  if (hw.curve().type != CurveType::X) throw std::invalid_argument("iterated_solution: needs the X-curve matrix");
  if (basis.kind != BasisKind::I) throw std::invalid_argument("iterated_solution: needs the I basis");
  const std::uint64_t top1 = static_cast<std::uint64_t>(cfg.a1()) * cfg.k;
  if (basis.members.size() != top1) throw std::invalid_argument("iterated_solution: I basis is incomplete");
  for (std::size_t i = 0; i < basis.members.size(); ++i)
    if (basis.members[i].m != i + 1) throw std::invalid_argument("iterated_solution: I basis out of order");
  const std::uint64_t range = static_cast<std::uint64_t>(cfg.a_at(b + 1)) * cfg.k;
  if (m < 1 || m > range)
    throw std::out_of_range("iterated_solution: m must lie in [1, a_{b+1} k] = [1, " + std::to_string(range) + "]");

  const auto& vars = z_vars(cfg.n);
  // v is indexed by m_{s+1} - 1; walk down from level b to level 1.
  std::vector<FpPoly> v(range, FpPoly(vars, cfg.p));
  v[m - 1] = FpPoly::constant(vars, cfg.p, 1);
  for (unsigned s = b; s >= 1; --s) {
    const auto& blk = hw.block(cfg.a_at(s));
    std::vector<FpPoly> next(blk.rows, FpPoly(vars, cfg.p));
    for (std::size_t f = 0; f < blk.rows; ++f)
      for (std::size_t h = 0; h < blk.cols; ++h) {
        if (v[h].is_zero() || blk.entries[f][h].is_zero()) continue;
        next[f] += mul(frobenius(blk.entries[f][h], s), v[h], exec);
      }
    v = std::move(next);
  }
  IteratedSolution out;
  out.b = b;
  out.m = m;
  out.coeffs = std::move(v);
  out.basis = &basis;
  return out;
}

}  // namespace kzmodp
