#pragma once

// Sparse multivariate polynomials over F_p.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kzmodp/fp.hpp"

namespace kzmodp {

inline constexpr std::size_t kMaxVars = 12;
inline constexpr std::int64_t kDegreeOfZero = -1;

struct Monomial {
  std::array<std::uint32_t, kMaxVars> e{};

  std::uint32_t& operator[](std::size_t i) { return e[i]; }
  std::uint32_t operator[](std::size_t i) const { return e[i]; }
  bool operator==(const Monomial& o) const { return e == o.e; }
  bool operator!=(const Monomial& o) const { return e != o.e; }
  bool operator<(const Monomial& o) const { return e < o.e; }  // plain lex

  std::uint64_t degree() const;
  /// Componentwise sum; throws std::overflow_error past 32 bits.
  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  Monomial quotient(const Monomial& o) const;  // this / o, requires o | this
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

/// Graded lex: total degree first, then the first variable is most significant.
bool graded_lex_less(const Monomial& a, const Monomial& b);

struct GradedLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return graded_lex_less(b, a); }
};

using TermMap = std::unordered_map<Monomial, Fp, MonomialHash>;
using Term = std::pair<Monomial, Fp>;

class FpPoly {
 public:
  FpPoly() = default;
  FpPoly(std::vector<std::string> vars, std::uint32_t p);

  static FpPoly constant(std::vector<std::string> vars, std::uint32_t p, Fp c);
  static FpPoly variable(std::vector<std::string> vars, std::uint32_t p, std::size_t index);
  static FpPoly monomial(std::vector<std::string> vars, std::uint32_t p, const Monomial& m, Fp c);

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  std::uint32_t p() const { return p_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  /// Index of a variable name; throws std::invalid_argument if absent.
  std::size_t var_index(const std::string& name) const;
  bool has_var(const std::string& name) const;

  Fp coeff(const Monomial& m) const;
  void add_term(const Monomial& m, Fp c);
  void set_term(const Monomial& m, Fp c);
  void reserve(std::size_t n) { terms_.reserve(n); }

  /// Total degree; kDegreeOfZero for the zero polynomial.
  std::int64_t total_degree() const;
  std::vector<Term> sorted_terms() const;

  FpPoly& operator+=(const FpPoly& o);
  FpPoly& operator-=(const FpPoly& o);
  FpPoly& scale(Fp c);
  FpPoly operator-() const;

  bool operator==(const FpPoly& o) const;
  bool operator!=(const FpPoly& o) const { return !(*this == o); }

  /// Throws std::invalid_argument when moduli or variable lists differ.
  void check_compatible(const FpPoly& o) const;

 private:
  std::vector<std::string> vars_;
  std::uint32_t p_ = 0;
  TermMap terms_;
};

FpPoly operator+(FpPoly a, const FpPoly& b);
FpPoly operator-(FpPoly a, const FpPoly& b);
/// Serial product; see kernels.hpp for the parallel version.
FpPoly operator*(const FpPoly& a, const FpPoly& b);
FpPoly operator*(Fp c, FpPoly a);

/// Product keeping only terms of total degree <= max_degree (when given).
FpPoly mul_truncated(const FpPoly& a, const FpPoly& b, std::optional<std::uint64_t> max_degree);

FpPoly pow(const FpPoly& base, std::uint64_t e);

FpPoly partial_derivative(const FpPoly& f, const std::string& var);
FpPoly partial_derivative(const FpPoly& f, std::size_t var);

/// Coefficients of successive powers of a distinguished variable; each entry
/// lives over the remaining variables.
struct XSeries {
  std::string x;
  std::vector<FpPoly> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

XSeries expand_in_x(const FpPoly& f, const std::string& x);
/// Inverse of expand_in_x: rebuilds a polynomial over `vars` (which contains x).
FpPoly assemble(const XSeries& s, const std::vector<std::string>& vars);

/// Simultaneous substitution. Variables of f that are not assigned map to the
/// same-named variable of target_vars.
FpPoly substitute(const FpPoly& f, const std::map<std::string, FpPoly>& assignments,
                  const std::vector<std::string>& target_vars);

/// Renames/merges variables: variable i of f becomes target variable mapping[i].
FpPoly map_variables(const FpPoly& f, const std::vector<std::string>& target_vars,
                     const std::vector<std::size_t>& mapping);

/// z_i -> z_i - z_base for every i in `shifted` (same variable list).
FpPoly shift_variables(const FpPoly& f, std::size_t base, const std::vector<std::size_t>& shifted);

std::optional<std::int64_t> is_homogeneous(const FpPoly& f);

/// Raises every exponent to p^s times itself: f(z) -> f(z^{p^s}).
FpPoly frobenius(const FpPoly& f, unsigned s);

FpPoly truncate_degree(const FpPoly& f, std::uint64_t max_degree);

/// Exact quotient f/g, or nullopt when g does not divide f.
std::optional<FpPoly> divide_exact(const FpPoly& f, const FpPoly& g);

/// Human-readable form, for diagnostics only.
std::string to_string(const FpPoly& f);

/// Pascal rows binom(r, j) mod p for r <= max_row.
class BinomialTable {
 public:
  BinomialTable(std::uint32_t p, std::uint64_t max_row);
  Fp operator()(std::uint64_t r, std::uint64_t j) const { return j > r ? 0 : rows_[r][j]; }
  std::uint64_t max_row() const { return rows_.empty() ? 0 : rows_.size() - 1; }

 private:
  std::vector<std::vector<Fp>> rows_;
};

}  // namespace kzmodp
