#pragma once

#include "opq/algebras.hpp"
#include "opq/complex.hpp"
#include "opq/dg_algebra.hpp"
#include "opq/operad.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace opq {

struct Morphism {
  std::string name;
  std::string src;
  std::string tgt;
};

using MorphismPair = std::pair<std::string, std::string>;

/// Finite category given by a composition table, with an orthogonality relation closed
/// under symmetry and composition. Identities "id_X" are added automatically.
class OrthCategory {
public:
  OrthCategory() = default;
  /// compose entries are (g, f, g∘f). Throws StructuralError if the table is incomplete,
  /// inconsistent or not associative, or if a seed pair has no common target.
  OrthCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
               const std::vector<std::array<std::string, 3>> &compose, const std::vector<MorphismPair> &orth_seeds);

  [[nodiscard]] const std::vector<std::string> &objects() const { return objects_; }
  [[nodiscard]] const std::map<std::string, Morphism> &morphisms() const { return morphisms_; }
  [[nodiscard]] const Morphism &morphism(const std::string &name) const;
  [[nodiscard]] bool has_object(const std::string &o) const;
  [[nodiscard]] std::string identity(const std::string &object) const { return "id_" + object; }
  /// g∘f; throws when not composable.
  [[nodiscard]] const std::string &compose(const std::string &g, const std::string &f) const;
  [[nodiscard]] const std::map<MorphismPair, std::string> &composition_table() const { return compose_; }
  [[nodiscard]] const std::set<MorphismPair> &orth() const { return orth_; }
  [[nodiscard]] bool is_orth(const std::string &f1, const std::string &f2) const { return orth_.count({f1, f2}) > 0; }

private:
  std::vector<std::string> objects_;
  std::map<std::string, Morphism> morphisms_;
  std::map<MorphismPair, std::string> compose_;
  std::set<MorphismPair> orth_;
  friend std::set<MorphismPair> orth_closure(const OrthCategory &, const std::vector<MorphismPair> &);
};

/// Smallest symmetric, composition-stable relation containing the seeds.
std::set<MorphismPair> orth_closure(const OrthCategory &base, const std::vector<MorphismPair> &seeds);

/// Functor from an orthogonal category to dg algebras of one kind. Actions are flat
/// matrices between the algebras' carriers; missing identity actions are identities.
struct FieldTheory {
  OrthCategory base;
  OperadKind kind = OperadKind::uLie;
  std::map<std::string, DgAlgebra> algebras;
  std::map<std::string, RationalMatrix> actions;
  std::optional<std::size_t> truncation; // set on quantized theories

  [[nodiscard]] const DgAlgebra &algebra(const std::string &object) const;
  [[nodiscard]] RationalMatrix action(const std::string &morphism) const;
};

struct TheoryReport {
  std::vector<std::string> problems;
  [[nodiscard]] bool ok() const { return problems.empty(); }
};

/// Algebra validity per object, action shapes, algebra-morphism property and functoriality.
TheoryReport validate_theory(const FieldTheory &ft);

struct CausalityViolation {
  std::string f1, f2;
  std::size_t x = 0, y = 0; // basis indices in the sources of f1 and f2
  SparseVector r1, r2;
};

struct CausalityReport {
  std::vector<CausalityViolation> violations;
  std::size_t pairs = 0;   // orthogonal pairs examined
  std::size_t checked = 0; // basis pairs evaluated
  std::size_t skipped = 0; // basis pairs beyond the truncation bound
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Evaluates the distinguished pair on images of orthogonal pairs. Uses the standard
/// bipointing of the theory's kind unless one is supplied.
CausalityReport check_causality(const FieldTheory &ft, const std::optional<OperadPresentation> &bipointing = {});

/// Pointwise truncated envelope; actions become stage-n envelope maps.
FieldTheory quantize(const FieldTheory &lft, std::size_t n);
/// Pointwise commutator algebra with unchanged actions.
FieldTheory dequantize(const FieldTheory &qft);

enum class WMode { Strict, Homotopy };

struct WEntry {
  std::string morphism;
  std::optional<std::size_t> stage; // filtration stage for truncated theories
  bool ok = true;
  std::optional<int> witness_degree;
  std::string detail;
};

struct WReport {
  std::vector<WEntry> entries;
  [[nodiscard]] bool ok() const;
};

WReport check_w_constancy(const FieldTheory &ft, const std::vector<std::string> &w, WMode mode);

/// Filtration stage k of a filtered algebra's carrier: the subcomplex on basis vectors of
/// length at most k, with their flat indices.
std::pair<ChainComplex, std::vector<std::size_t>> filtration_stage(const DgAlgebra &a, std::size_t k);
/// Restriction of a filtration-preserving flat map to stage k.
ChainMap restrict_to_stage(const RationalMatrix &f, const DgAlgebra &src, const DgAlgebra &tgt, std::size_t k);

struct OrthFunctor {
  std::map<std::string, std::string> objects;
  std::map<std::string, std::string> morphisms; // identities may be omitted
};

/// Throws StructuralError unless F is a functor source -> target preserving orthogonality.
void validate_orth_functor(const OrthCategory &source, const OrthCategory &target, const OrthFunctor &F);
/// F*(ft) = ft ∘ F.
FieldTheory pullback_theory(const OrthCategory &source, const OrthFunctor &F, const FieldTheory &ft);

} // namespace opq
