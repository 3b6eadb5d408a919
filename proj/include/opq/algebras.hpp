#pragma once

#include "opq/dg_algebra.hpp"
#include "opq/operad.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace opq {

/// Commutator bracket μ - μ^op (with Koszul sign) on an As algebra; carrier, unit and
/// filtration are kept.
DgAlgebra commutator_functor(const DgAlgebra &a);

/// Pairing ω : V ⊗ V -> Q on the flat basis of the carrier.
struct PresymplecticComplex {
  ChainComplex carrier;
  std::map<std::pair<std::size_t, std::size_t>, Rational> omega;

  [[nodiscard]] Rational pair(std::size_t i, std::size_t j) const;
  [[nodiscard]] Rational pair(const SparseVector &v, const SparseVector &w) const;
  void set(std::size_t i, std::size_t j, const Rational &c);
};

struct PresymplecticReport {
  std::vector<std::string> problems;
  [[nodiscard]] bool ok() const { return problems.empty(); }
};

PresymplecticReport validate_presymplectic(const PresymplecticComplex &v);

/// H(V, ω): carrier V ⊕ Q with the extra unit vector appended to the degree-0 block.
DgAlgebra heisenberg(const PresymplecticComplex &v);
/// Flat index in heisenberg(v) of the flat basis vector i of v.carrier.
std::size_t heisenberg_index(const ChainComplex &carrier, std::size_t i);
/// Flat index of the unit in heisenberg(v).
std::size_t heisenberg_unit_index(const ChainComplex &carrier);
/// H(f) = f ⊕ id between Heisenberg carriers.
ChainMap heisenberg_map(const ChainMap &f);
/// Whether f preserves the pairings: ω_W(f x, f y) = ω_V(x, y).
bool preserves_pairing(const ChainMap &f, const PresymplecticComplex &v, const PresymplecticComplex &w);

struct AlgebraReport {
  std::vector<std::string> problems; // shape, degree and chain-map failures
  RelationReport relations;
  [[nodiscard]] bool ok() const { return problems.empty() && relations.ok(); }
};

/// Degree and derivation checks for each structure map, then check_relations against
/// the presentation of the algebra's kind.
AlgebraReport validate_algebra(const DgAlgebra &a);

/// Whether the flat matrix f : a -> b is a chain map intertwining every structure map.
/// Tuples beyond a truncation bound of `a` are skipped.
bool is_algebra_morphism(const RationalMatrix &f, const DgAlgebra &a, const DgAlgebra &b);

} // namespace opq
