#pragma once

// Polynomial solutions of the KZ system over F_p and the module they span.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kzmodp/arith.hpp"
#include "kzmodp/kernels.hpp"
#include "kzmodp/poly.hpp"

namespace kzmodp {

using Weights = std::vector<std::uint32_t>;
using PolyVector = std::vector<FpPoly>;

/// z1..zn
std::vector<std::string> z_vars(std::size_t n);
/// l3..ln (n - 2 names)
std::vector<std::string> lambda_vars(std::size_t n);

Weights unit_weights(const PrimeConfig& cfg);
/// Throws ConfigError unless 1 <= w_i < q for all i.
void validate_weights(const Weights& w, const PrimeConfig& cfg);

struct ExponentVectorM {
  std::vector<std::uint64_t> M;
  bool minimal = false;

  std::uint64_t sum() const;
};

struct MinimalExponents {
  ExponentVectorM minimal;    // componentwise least positive solution of q M = -w (mod p)
  ExponentVectorM canonical;  // w_j (a_1 p - 1)/q
};

MinimalExponents minimal_exponents(const Weights& w, const PrimeConfig& cfg);

/// prod (t - z_i)^{M_i} over (t, z1..zn), expanded by repeated squaring.
FpPoly master_polynomial(const ExponentVectorM& M, const PrimeConfig& cfg);

/// The vector (coefficient of t^w in master / (t - z_j))_j.
PolyVector arithmetic_vector(const ExponentVectorM& M, std::uint64_t w, std::uint32_t p, Exec exec = Exec::Parallel);

enum class BasisKind { I, J, K };
std::string to_string(BasisKind k);

struct Solution {
  PolyVector vec;
  std::uint64_t l = 0;  // extraction index: coefficient of t^{lp-1}
  std::uint64_t m = 0;  // reversed label m = v - l + 1
  std::int64_t degree = kDegreeOfZero;
};

struct SolutionBasis {
  BasisKind kind = BasisKind::I;
  PrimeConfig cfg;
  Weights lambda;
  std::vector<std::uint64_t> M;
  std::vector<Solution> members;             // ordered by m
  std::vector<std::uint64_t> excluded_zero;  // l values whose vector vanished
};

/// All P^{lp-1}(z, M) with 0 < lp - 1 <= sum(M) - 1; zero vectors are excluded
/// and listed separately.
SolutionBasis arithmetic_solutions(const Weights& w, const ExponentVectorM& M, const PrimeConfig& cfg,
                                   Exec exec = Exec::Parallel);

/// The basis I^1..I^{a_1 k} for unit weights and minimal exponents.
SolutionBasis basis_I(const PrimeConfig& cfg, Exec exec = Exec::Parallel);

enum class KzMode {
  Reduced,  // q (z_i - z_c) d_i s_c = w_i (s_i - s_c) for c != i, plus sum w_i s_i = 0
  Cleared   // the full system with denominators cleared by q prod_{j != i}(z_i - z_j)
};

struct KzReport {
  bool pass = true;
  KzMode mode = KzMode::Reduced;
  std::size_t checks = 0;
  std::optional<std::size_t> fail_i;      // 1-based equation index, 0 for the algebraic one
  std::optional<std::size_t> fail_coord;  // 1-based coordinate
  std::string message;
};

KzReport verify_kz(const PolyVector& sol, const Weights& w, const PrimeConfig& cfg, KzMode mode = KzMode::Reduced);

/// Reduced-mode check for vectors too large to hold at once: coordinates are
/// produced on demand and at most two are alive at any time.
KzReport verify_kz_lazy(std::size_t n, const std::function<FpPoly(std::size_t)>& coordinate, const Weights& w,
                        const PrimeConfig& cfg);

/// [sum(Mbar)/p]; when sum(w) = n it also asserts a_1 k - e(a_1).
std::uint64_t module_rank(const Weights& w, const PrimeConfig& cfg);

struct IndependenceReport {
  bool disjoint_supports = true;
  std::size_t rank = 0;
  std::size_t expected = 0;
  bool pass = false;
  std::string message;
};

/// Residue-class supports of the first coordinates must be pairwise disjoint,
/// and the rank over F_p(z^p) is bounded below by random specialisation.
IndependenceReport independence_certificate(const std::vector<PolyVector>& members, std::uint32_t p,
                                            std::uint64_t seed = 1, int trials = 6);

/// Rank over F_p(z^p) of a family of vectors (lower bound by specialisation).
std::size_t module_span_rank(const std::vector<PolyVector>& members, std::uint32_t p, std::uint64_t seed = 1,
                             int trials = 6);

/// Coefficients c_l in F_p[z^p] with s = sum c_l I^l, via the disjoint residue
/// supports of the first coordinate. nullopt if s is not in the span.
std::optional<std::vector<FpPoly>> express_in_basis(const PolyVector& s, const SolutionBasis& basis);

struct EmbeddingMatrix {
  std::vector<std::uint64_t> row_l;  // l' = v', ..., 1
  std::vector<std::uint64_t> col_l;  // l = v, ..., 1
  std::vector<std::vector<FpPoly>> entries;
};

/// Change matrix expressing P^{l'p-1}(z, M') through P^{lp-1}(z, M), M' > M.
EmbeddingMatrix embedding_matrix(const ExponentVectorM& Mprime, const ExponentVectorM& M, const PrimeConfig& cfg);

EmbeddingMatrix compose(const EmbeddingMatrix& outer, const EmbeddingMatrix& inner);

struct EmbeddingReport {
  bool unit_lower_triangular = false;
  bool entries_in_frobenius_image = false;
  bool coefficient_identity = false;  // P^{l'p-1}(M') = sum entry * P^{lp-1}(M)
  bool full_reexpansion = false;      // prod (t^p - z^p)^N * P(t, z, M) = P(t, z, M')
  bool pass() const {
    return unit_lower_triangular && entries_in_frobenius_image && coefficient_identity && full_reexpansion;
  }
};

EmbeddingReport verify_embedding(const ExponentVectorM& Mprime, const ExponentVectorM& M, const PrimeConfig& cfg);

using Partition = std::vector<std::vector<std::size_t>>;  // 0-based index blocks

/// Blocks of consecutive indices with the given sizes-by-weight, e.g. (2,1,1) -> {0,1},{2},{3}.
Partition contiguous_partition(const Weights& fused);

struct FusionResult {
  Weights fused_weights;
  ExponentVectorM fused_M;
  Partition partition;
  std::vector<Solution> images;  // same l labels as the inputs
  bool consistent = true;        // all coordinates of a block agreed
};

/// Throws ConfigError when a fused weight reaches q or the partition is not a
/// partition of {0..n-1}.
FusionResult fusion(const SolutionBasis& basis, const Partition& partition, const PrimeConfig& cfg);

enum class Route { A, B };

/// Route A: triangular combination of the I basis; route B: extraction from the
/// master polynomial shifted by z1.
SolutionBasis basis_J(const PrimeConfig& cfg, Route route, Exec exec = Exec::Parallel);
SolutionBasis basis_J_from_I(const SolutionBasis& I);

/// Route A: extraction from x^M (x-1)^M prod (x - l_i)^M; route B: closed-form sum.
SolutionBasis basis_K(const PrimeConfig& cfg, Route route, Exec exec = Exec::Parallel);

/// Closed-form K^m summand at exponent tuple l: n values, all zero outside the range.
std::vector<Fp> k_closed_form_term(std::uint64_t m, const std::vector<std::uint64_t>& l, const PrimeConfig& cfg);

/// Degree of J^m: (a_1 p - 1)/q + (m-1)p - k.
std::int64_t j_degree(const PrimeConfig& cfg, std::uint64_t m);

/// (z2 - z1)^weight * f(l_i = (z_i - z1)/(z2 - z1)); throws std::domain_error if
/// some term of f has degree above weight.
FpPoly homogenize(const FpPoly& f, const std::vector<std::string>& zvars, std::uint64_t weight);
PolyVector homogenize(const PolyVector& f, const std::vector<std::string>& zvars, std::uint64_t weight);

}  // namespace kzmodp
