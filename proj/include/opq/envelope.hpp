#pragma once

#include "opq/algebras.hpp"
#include "opq/complex.hpp"
#include "opq/dg_algebra.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace opq {

/// Nondecreasing sequence of generator indices; odd generators occur at most once.
using Monomial = std::vector<std::size_t>;
/// Linear combination of PBW monomials; no zero coefficients are stored.
using PBWElement = std::map<Monomial, Rational>;

void add_term(PBWElement &acc, const Monomial &m, const Rational &c);
void add_scaled(PBWElement &acc, const PBWElement &v, const Rational &c);

/// Truncated unital universal enveloping algebra of a uLie algebra V, presented on a
/// PBW basis in the generators Ṽ = V / Q·1. Products are only defined while the total
/// word length stays within the truncation bound.
class TruncatedEnvelope {
public:
  /// `order` lists the source flat indices used as generators, in PBW order; the single
  /// index left out must have a nonzero coefficient in the unit. By default the generators
  /// are all indices except the last one carrying the unit.
  TruncatedEnvelope(DgAlgebra source, std::size_t truncation, std::optional<std::vector<std::size_t>> order = {});
  TruncatedEnvelope(const TruncatedEnvelope &o);

  [[nodiscard]] const DgAlgebra &source() const { return source_; }
  [[nodiscard]] std::size_t truncation() const { return truncation_; }
  [[nodiscard]] std::size_t generator_count() const { return generators_.size(); }
  /// Source flat index of each generator.
  [[nodiscard]] const std::vector<std::size_t> &generators() const { return generators_; }
  [[nodiscard]] std::size_t unit_direction() const { return unit_direction_; }
  [[nodiscard]] int generator_degree(std::size_t g) const { return gen_degree_[g]; }
  [[nodiscard]] int degree(const Monomial &m) const;
  [[nodiscard]] bool is_normal(const Monomial &m) const;

  [[nodiscard]] PBWElement one() const { return {{Monomial{}, Rational(1)}}; }
  [[nodiscard]] PBWElement generator(std::size_t g) const { return {{Monomial{g}, Rational(1)}}; }
  /// Image of a source vector: generators stay, the unit direction is rewritten through 1.
  [[nodiscard]] PBWElement embed(const SparseVector &v) const;
  /// Bracket of two generators, embedded.
  [[nodiscard]] const PBWElement &bracket(std::size_t i, std::size_t j) const { return brackets_[i][j]; }

  /// Normal form of a word of generators; throws TruncationOverflow past the bound.
  [[nodiscard]] PBWElement normal_form(const std::vector<std::size_t> &word) const;
  [[nodiscard]] PBWElement multiply(const PBWElement &a, const PBWElement &b) const;
  /// Graded derivation induced by the source differential.
  [[nodiscard]] PBWElement differential(const PBWElement &a) const;

  /// Normal monomials of length at most n, by degree ascending, then length, then lexicographic.
  [[nodiscard]] std::vector<Monomial> stage_basis(std::size_t n) const;
  /// Filtration stage n as a chain complex on stage_basis(n).
  [[nodiscard]] ChainComplex stage_complex(std::size_t n) const;
  /// Flat coordinates of an element in stage_basis(n).
  [[nodiscard]] SparseVector stage_coordinates(const PBWElement &a, std::size_t n) const;
  [[nodiscard]] PBWElement from_stage_coordinates(const SparseVector &v, std::size_t n) const;
  /// The top stage as an As algebra whose product is partial beyond the bound.
  [[nodiscard]] DgAlgebra as_dg_algebra() const;

  /// "1", "e1", "e1*e2^2", ... with generators numbered from 1.
  [[nodiscard]] std::string monomial_str(const Monomial &m) const;
  [[nodiscard]] std::string element_str(const PBWElement &a) const;

private:
  PBWElement left_mul(std::size_t i, const Monomial &m) const;
  PBWElement left_mul(std::size_t i, const PBWElement &a) const;
  void check_length(std::size_t len) const;

  DgAlgebra source_;
  std::size_t truncation_ = 0;
  std::vector<std::size_t> generators_;
  std::vector<int> gen_degree_;
  std::size_t unit_direction_ = 0;
  std::vector<long> gen_of_source_; // source index -> generator or -1
  SparseVector unit_;
  std::vector<std::vector<PBWElement>> brackets_;
  std::vector<PBWElement> d_gen_;

  mutable std::mutex memo_mutex_;
  mutable std::map<std::pair<std::size_t, Monomial>, PBWElement> memo_;
};

enum class RewriteOrder { Leftmost, Rightmost, Random };

/// Independent rewriting engine: reduces adjacent out-of-order pairs of a word until every
/// word is a PBW monomial, choosing the pair by `order`.
PBWElement rewrite_normal_form(const TruncatedEnvelope &env, const std::vector<std::size_t> &word,
                               RewriteOrder order, std::mt19937_64 *rng = nullptr);

/// Per-degree dimension of the filtration stage n, counted as graded-symmetric powers of Ṽ.
std::map<int, std::size_t> filtration_dim(const DgAlgebra &v, std::size_t n);

/// Stage-n map between envelopes induced by a uLie morphism rho (flat matrix).
/// Throws StructuralError when rho is not a uLie morphism.
ChainMap envelope_map(const RationalMatrix &rho, const TruncatedEnvelope &src, const TruncatedEnvelope &tgt,
                      std::size_t n);
/// Image of one element under the multiplicative extension of rho.
PBWElement envelope_image(const RationalMatrix &rho, const TruncatedEnvelope &src, const TruncatedEnvelope &tgt,
                          const PBWElement &a);

/// CCR algebra: the truncated envelope of the Heisenberg algebra.
TruncatedEnvelope ccr(const PresymplecticComplex &v, std::size_t truncation);

/// Restricts an algebra map κ : env -> A (matrix on stage_basis(N)) to a uLie map V -> φ*A.
RationalMatrix adjunction_forward(const TruncatedEnvelope &env, const DgAlgebra &a, const RationalMatrix &kappa);
/// Multiplicative extension of a uLie map ρ : V -> φ*A to env -> A. Throws StructuralError if ρ
/// is not a uLie morphism and TruncationOverflow if the generated subalgebra of A does
/// not stabilize within the truncation bound.
RationalMatrix adjunction_backward(const TruncatedEnvelope &env, const DgAlgebra &a, const RationalMatrix &rho);

} // namespace opq
