#pragma once

// Cartier operator and Hasse-Witt blocks of superelliptic curves y^q = B(x).

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "kzmodp/arith.hpp"
#include "kzmodp/kernels.hpp"
#include "kzmodp/kz.hpp"
#include "kzmodp/poly.hpp"

namespace kzmodp {

enum class CurveType { X, XTilde, Y };
std::string to_string(CurveType c);

/// B(x) = prod_j (x - r_j)^{weights_j}. For X the roots are z1..zn, for XTilde
/// z1..zm with the fused weights, for Y they are 0, 1, l3..ln.
struct CurveSpec {
  CurveType type = CurveType::X;
  std::uint32_t q = 0;
  Weights weights;
  std::vector<std::string> vars;  // parameter variables of the entries

  std::uint32_t degree() const;
};

CurveSpec curve_X(const PrimeConfig& cfg);
CurveSpec curve_XTilde(const PrimeConfig& cfg, const Weights& fused);
CurveSpec curve_Y(const PrimeConfig& cfg);

/// Factors of x^shift * B(x)^E as linear factors over curve.vars, with the
/// factor at root index `drop` (if any) lowered by one.
std::vector<LinearFactor> branch_factors(const CurveSpec& curve, std::uint64_t E, std::uint64_t& shift,
                                         std::optional<std::size_t> drop = std::nullopt);

/// B(x) as a polynomial over (x, vars...).
FpPoly branch_polynomial(const CurveSpec& curve, std::uint32_t p);

struct Vanishing {
  std::vector<std::uint32_t> e;  // e_j(a)
  std::uint32_t total = 0;       // e(a)
};

/// e_j(a) = ceil((w_j a + 1)/q - 1).
Vanishing e_vanishing(const Weights& w, std::uint32_t a, std::uint32_t q);

struct DifferentialBasis {
  std::uint32_t a = 0;
  std::vector<std::uint32_t> exponents;  // x^{i-1} dx / y^a, i = 1..ak
  Vanishing vanishing;                   // required orders at the roots
  std::size_t dim = 0;                   // ak - e(a)
};

DifferentialBasis differential_basis(const CurveSpec& curve, std::uint32_t a, const PrimeConfig& cfg);

struct HasseWittBlock {
  std::uint32_t a = 0;
  std::uint32_t eta_a = 0;
  std::size_t rows = 0;  // f = 1..ak
  std::size_t cols = 0;  // h = 1..eta(a)k
  std::vector<std::vector<FpPoly>> entries;
  // Entries are stored untwisted; the operator itself is 1/p-semilinear, so
  // composing blocks means substituting z -> z^{p^s} in the later factors.
  std::string semilinear = "p^-1";
};

/// (eta(a)p - a)/q
std::uint64_t hw_exponent(std::uint32_t a, const PrimeConfig& cfg);
/// (eta(a)p - a)/q - (f-1) + (h-1)p
std::int64_t hw_entry_degree(std::uint32_t a, std::uint64_t f, std::uint64_t h, const PrimeConfig& cfg);

HasseWittBlock cartier_block(std::uint32_t a, const CurveSpec& curve, const PrimeConfig& cfg,
                             Exec exec = Exec::Parallel);

/// Independent single-entry extractor: expands x^{ak-f} B^E by repeated squaring.
FpPoly cartier_entry_by_power(std::uint32_t a, std::uint64_t f, std::uint64_t h, const CurveSpec& curve,
                              const PrimeConfig& cfg);

/// Closed-form Y-curve entry: sum over the tuples l with
/// 0 <= sum(l) + f - 1 - (h-1)p <= E and l_i <= E.
FpPoly hw_closed_form(std::uint32_t a, std::uint64_t f, std::uint64_t h, const PrimeConfig& cfg);

/// One summand of the closed form at exponent tuple l (0 if l is outside the range).
Fp hw_closed_form_term(std::uint32_t a, std::uint64_t f, std::uint64_t h, const std::vector<std::uint64_t>& l,
                       const PrimeConfig& cfg);

/// Lazily computed, thread-safe cache of blocks for one curve.
class HasseWittMatrix {
 public:
  HasseWittMatrix(CurveSpec curve, PrimeConfig cfg, Exec exec = Exec::Parallel);

  const HasseWittBlock& block(std::uint32_t a) const;
  const CurveSpec& curve() const { return curve_; }
  const PrimeConfig& config() const { return cfg_; }
  std::size_t genus() const;
  /// Dense g x g assembly, rows/cols ordered by (a, index) with a = 1..q-1.
  std::vector<std::vector<FpPoly>> full() const;

 private:
  CurveSpec curve_;
  PrimeConfig cfg_;
  Exec exec_;
  mutable std::mutex mu_;
  mutable std::map<std::uint32_t, std::shared_ptr<const HasseWittBlock>> cache_;
};

/// All blocks a = 1..q-1, computed in parallel, in order.
std::vector<HasseWittBlock> hasse_witt_blocks(const CurveSpec& curve, const PrimeConfig& cfg);

struct CartierHatRow {
  std::uint64_t m = 0;        // row label; the row equals I^m for unit weights
  std::uint64_t x_power = 0;  // a_1 k - m: the row is dual to x^{x_power} dx / y^{a_1}
  PolyVector vec;
};

struct CartierHat {
  CurveSpec curve;
  std::vector<std::uint64_t> M;
  std::vector<CartierHatRow> rows;  // m = 1..a_1 k
};

/// Rows P^{(a_1 k - m)p + p - 1}(z, M) for m = 1..a_1 k. Uses the canonical
/// exponents w_j (a_1 p - 1)/q for a fused curve.
CartierHat cartier_hat(const CurveSpec& curve, const PrimeConfig& cfg, Exec exec = Exec::Parallel);

struct RegularityReport {
  bool pass = true;
  // order[j][i]: verified vanishing order (capped at the requirement) of the
  // j-th form at root i, against required[i].
  std::vector<std::vector<std::uint32_t>> order;
  std::vector<std::uint32_t> required;
  std::string message;
};

/// With untwisted storage, u_j(x) = sum_m row_m[j] x^{a_1 k - m} must be
/// divisible by (x - z_i^p)^{e_i(a_1)}.
RegularityReport check_regularity(const CartierHat& hat, const PrimeConfig& cfg);

struct IteratedSolution {
  unsigned b = 0;
  std::uint64_t m = 0;
  std::vector<FpPoly> coeffs;  // coeffs[m1-1] in F_p[z^p], multiplies I^{m1}
  const SolutionBasis* basis = nullptr;

  FpPoly coordinate(std::size_t j, Exec exec = Exec::Parallel) const;
  PolyVector expand(Exec exec = Exec::Parallel) const;
};

struct IteratedKzReport {
  bool pass = false;
  bool coefficients_in_frobenius_image = false;
  bool expanded = false;  // true: the expanded vector was checked directly
  std::uint64_t estimated_terms = 0;  // sum |c_m| |I^m_j| over m, largest j
  KzReport kz;            // expanded check, or the first failing basis member
  std::string method;     // "expanded" or "linearity"
};

/// Exact KZ check of an iterated solution. Small cases are expanded and checked
/// coordinate by coordinate. Otherwise the check is structural: every c_m lies in
/// F_p[z^p], so d_i c_m = 0 and the residual of sum c_m I^m is sum c_m times the
/// residual of I^m; it then suffices that each I^m with c_m != 0 is a solution.
IteratedKzReport verify_iterated(const IteratedSolution& s, std::uint64_t expand_limit = 2000000);

/// sum over m_1..m_b of block(a_b)[m_b][m](z^{p^b}) ... block(a_1)[m_1][m_2](z^p) I^{m_1}(z),
/// for 1 <= m <= a_{b+1} k. `hw` must be the X-curve matrix.
IteratedSolution iterated_solution(unsigned b, std::uint64_t m, const PrimeConfig& cfg, const HasseWittMatrix& hw,
                                   const SolutionBasis& basis, Exec exec = Exec::Parallel);

}  // namespace kzmodp
