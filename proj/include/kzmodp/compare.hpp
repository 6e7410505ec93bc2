#pragma once

// Taylor coefficients of the distinguished solution in characteristic 0, their
// reduction mod p, and the term-by-term match with iterated solutions.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kzmodp/arith.hpp"
#include "kzmodp/cartier.hpp"
#include "kzmodp/kz.hpp"
#include "kzmodp/rational.hpp"

namespace kzmodp {

using Tuple = std::vector<std::uint64_t>;

/// Exact binom(-1/q, m) for m = 0..max, built by the ratio recursion.
class NegInvQBinomials {
 public:
  NegInvQBinomials(std::uint32_t q, std::uint64_t max_m);
  const Rational& operator()(std::uint64_t m) const { return values_.at(m); }
  std::uint64_t max() const { return values_.size() - 1; }

 private:
  std::vector<Rational> values_;
};

struct LCoefficient {
  Tuple k;                                 // (k_3, ..., k_n)
  std::vector<Rational> value;             // n entries
  std::optional<std::vector<Fp>> reduced;  // present when requested
  int p_valuation = 0;                     // minimum over the nonzero entries
};

LCoefficient l_coefficient(const Tuple& k, const PrimeConfig& cfg, bool reduce = true);
/// Same, reusing a precomputed table (it must reach sum(k) + cfg.k).
LCoefficient l_coefficient(const Tuple& k, const PrimeConfig& cfg, const NegInvQBinomials& table, bool reduce = true);

struct ShiftProfile {
  unsigned b = 0;                               // top base-p digit index over the tuple
  Tuple m;                                      // m_0 .. m_{b+1}
  std::vector<std::vector<std::uint32_t>> digits;  // digits[s][i] = k_i^s, s = 0..b
  std::vector<std::uint64_t> r;                 // r_s = sum_i k_i^s + m_s - 1 - (m_{s+1} - 1)p
  bool admissible = false;
  std::string reason;  // first failed inequality when not admissible
};

ShiftProfile shift_profile(const Tuple& k, const PrimeConfig& cfg);

/// m_0 = k + 1 and 1 <= m_s <= a_s k for s = 1..b+1.
bool in_set_M(const Tuple& m, const PrimeConfig& cfg);

/// (-1)^{(a_{b+1} p^{b+1} - 1)/q + m_{b+1} - 1} binom(A_{b+1}, m_{b+1} - 1) mod p.
Fp n_prefactor(const Tuple& m, const PrimeConfig& cfg);

enum class NTermMode {
  TopLevelNonzero,  // the level-b Hasse-Witt factor keeps only nonconstant terms (b >= 1)
  Literal           // full product as written, which double counts for b >= 1
};

std::string to_string(NTermMode mode);

/// Cached K basis and Y-curve Hasse-Witt blocks for one configuration.
struct DecompositionContext {
  explicit DecompositionContext(const PrimeConfig& cfg, Exec exec = Exec::Parallel);

  PrimeConfig cfg;
  SolutionBasis K;
  HasseWittMatrix hw;
};

/// The n-vector over l3..ln attached to an m-tuple, truncated to total degree <= max_degree.
PolyVector n_term(const Tuple& m, const DecompositionContext& ctx, std::uint64_t max_degree,
                  NTermMode mode = NTermMode::TopLevelNonzero);

/// Reduced L_k rebuilt factor by factor from the closed forms along the shift
/// profile: prefactor * prod_s (Hasse-Witt term at digits k^s) * (K term at digits k^0).
/// Zero for non-admissible tuples.
std::vector<Fp> product_form(const Tuple& k, const PrimeConfig& cfg);

struct DecompositionMismatch {
  Tuple k;
  std::vector<Fp> l_reduced;
  std::vector<Fp> n_value;
};

struct SupportCollision {
  Tuple monomial;
  Tuple first;
  Tuple second;
};

struct DecompositionReport {
  std::uint64_t max_degree = 0;
  NTermMode mode = NTermMode::TopLevelNonzero;
  std::uint64_t tuples = 0;
  std::uint64_t matched = 0;             // nonzero L_k equal to the N sum
  std::uint64_t zero_nonadmissible = 0;  // L_k = 0, tuple not admissible, no N contribution
  std::vector<DecompositionMismatch> mismatched;
  std::vector<SupportCollision> support_collisions;
  std::map<unsigned, std::uint64_t> contributing_by_b;  // m-tuples with a nonzero truncated N
  std::uint64_t trichotomy_violations = 0;               // L_k = 0 differs from non-admissibility
  std::uint64_t negative_valuations = 0;
  std::uint64_t product_form_checked = 0;
  std::uint64_t product_form_failures = 0;

  bool pass() const;
  nlohmann::json to_json() const;
};

DecompositionReport verify_decomposition(const PrimeConfig& cfg, std::uint64_t max_degree,
                                         NTermMode mode = NTermMode::TopLevelNonzero, Exec exec = Exec::Parallel);

nlohmann::json to_json(const LCoefficient& c);
nlohmann::json to_json(const ShiftProfile& s);

}  // namespace kzmodp
