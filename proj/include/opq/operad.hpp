#pragma once

#include "opq/dg_algebra.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace opq {

inline constexpr const char *kDefaultColor = "*";

struct Generator {
  std::string name;
  std::vector<std::string> input_colors; // arity = input_colors.size()
  std::string output_color = kDefaultColor;
  int degree = 0;

  [[nodiscard]] std::size_t arity() const { return input_colors.size(); }
};

class GeneratorAlphabet {
public:
  GeneratorAlphabet() = default;
  GeneratorAlphabet(std::set<std::string> colors, std::vector<Generator> generators);

  /// Single-colored alphabet from (name, arity) pairs, all of degree 0.
  static GeneratorAlphabet single_colored(const std::vector<std::pair<std::string, std::size_t>> &gens);

  [[nodiscard]] const std::vector<Generator> &generators() const { return generators_; }
  [[nodiscard]] const std::set<std::string> &colors() const { return colors_; }
  [[nodiscard]] const Generator &at(const std::string &name) const;
  [[nodiscard]] bool contains(const std::string &name) const;

private:
  std::set<std::string> colors_;
  std::vector<Generator> generators_;
};

/// Element of a free colored operad: a rooted tree of generator instances whose
/// leaves carry explicit input labels 1..n. A bare leaf is the operadic unit.
class OperadTree {
public:
  struct Node {
    bool is_leaf = true;
    std::string op;     // generator name (internal nodes)
    std::string color;  // output color of this node / color of the leaf
    std::size_t label = 1;
    std::vector<Node> children;
    friend bool operator==(const Node &, const Node &) = default;
    friend std::strong_ordering operator<=>(const Node &a, const Node &b);
  };

  static OperadTree leaf(std::size_t label, std::string color = kDefaultColor);
  static OperadTree unit(std::string color = kDefaultColor) { return leaf(1, std::move(color)); }
  /// Generator applied to subtrees; leaf labels of the result are taken as given.
  static OperadTree op(std::string name, std::vector<OperadTree> children, std::string color = kDefaultColor);

  [[nodiscard]] const Node &root() const { return root_; }
  [[nodiscard]] std::size_t arity() const;
  [[nodiscard]] std::string color() const { return root_.color; }
  /// Leaf labels in planar (left-to-right) order.
  [[nodiscard]] std::vector<std::size_t> planar_labels() const;
  /// Leaf colors indexed by label - 1.
  [[nodiscard]] std::vector<std::string> input_colors() const;
  /// Sum of the degrees of all generator instances.
  [[nodiscard]] int degree(const GeneratorAlphabet &alphabet) const;
  /// Throws StructuralError when arities, colors or labels are inconsistent.
  void check(const GeneratorAlphabet &alphabet) const;

  [[nodiscard]] std::string str() const;

  friend bool operator==(const OperadTree &, const OperadTree &) = default;
  friend std::strong_ordering operator<=>(const OperadTree &a, const OperadTree &b) { return a.root_ <=> b.root_; }

private:
  explicit OperadTree(Node root) : root_(std::move(root)) {}
  Node root_;
  friend OperadTree graft(const OperadTree &, const std::vector<OperadTree> &);
  friend OperadTree permute(const OperadTree &, std::span<const std::size_t>);
};

/// Operadic composition: leaf i of `outer` is replaced by inners[i-1]; the leaves of
/// inners[k] are relabeled after those of inners[0..k-1].
OperadTree graft(const OperadTree &outer, const std::vector<OperadTree> &inners);

/// Right permutation action; sigma is a permutation of 1..n in one-line notation and the
/// leaf labeled sigma(i) is relabeled i. permute(permute(t, s), u) = permute(t, s∘u).
OperadTree permute(const OperadTree &t, std::span<const std::size_t> sigma);

/// Formal Q-linear combination of trees of equal arity.
class TreeCombination {
public:
  TreeCombination() = default;
  TreeCombination(OperadTree t) { add(std::move(t), Rational(1)); } // NOLINT(google-explicit-constructor)

  void add(OperadTree t, const Rational &c);
  [[nodiscard]] const std::map<OperadTree, Rational> &terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::string str() const;

  TreeCombination &operator+=(const TreeCombination &o);
  friend TreeCombination operator+(TreeCombination a, const TreeCombination &b) { return a += b; }
  friend TreeCombination operator-(TreeCombination a, const TreeCombination &b);
  friend TreeCombination operator*(const Rational &c, const TreeCombination &a);
  friend bool operator==(const TreeCombination &, const TreeCombination &) = default;

private:
  std::map<OperadTree, Rational> terms_;
};

TreeCombination graft(const TreeCombination &outer, const std::vector<TreeCombination> &inners);
TreeCombination permute(const TreeCombination &t, std::span<const std::size_t> sigma);

/// Parses the prefix text format, e.g. "mu(slot(1), eta()) - 1/2*bracket(2, 1)".
TreeCombination parse_combination(const std::string &text);
OperadTree parse_tree(const std::string &text);

struct Relation {
  std::string name;
  TreeCombination lhs;
  TreeCombination rhs;
};

struct OperadPresentation {
  GeneratorAlphabet alphabet;
  std::vector<Relation> relations;
  std::optional<std::pair<TreeCombination, TreeCombination>> distinguished_pair;
};

/// Checks relation arities/colors against the alphabet; throws StructuralError.
void check_presentation(const OperadPresentation &p);

/// As, Lie, uLie or Pois with its standard bipointing: the bracket (commutator for As)
/// against the zero operation.
OperadPresentation named_presentation(OperadKind which);
/// As bipointed by (mu, mu^op).
OperadPresentation as_with_opposite_pair();

/// Evaluates trees through the algebra's structure maps with Koszul signs. Inputs may be
/// inhomogeneous; evaluation is multilinear.
SparseVector evaluate(const OperadTree &t, const DgAlgebra &a, std::span<const SparseVector> inputs,
                      const GeneratorAlphabet *alphabet = nullptr);
SparseVector evaluate(const TreeCombination &expr, const DgAlgebra &a, std::span<const SparseVector> inputs,
                      const GeneratorAlphabet *alphabet = nullptr);

struct RelationViolation {
  std::string relation;
  std::vector<std::size_t> inputs; // flat basis indices
  SparseVector difference;         // lhs - rhs
};

struct RelationReport {
  std::vector<RelationViolation> violations;
  std::size_t checked = 0;
  std::size_t skipped = 0; // tuples beyond a truncation bound
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

RelationReport check_relations(const OperadPresentation &p, const DgAlgebra &a);
RelationReport check_relation(const Relation &r, const DgAlgebra &a, const GeneratorAlphabet *alphabet = nullptr);

/// Operad morphism given on generators.
struct OperadMorphism {
  GeneratorAlphabet source;
  GeneratorAlphabet target;
  std::map<std::string, TreeCombination> images;
};

TreeCombination apply_morphism(const OperadMorphism &phi, const OperadTree &t);
TreeCombination apply_morphism(const OperadMorphism &phi, const TreeCombination &t);

/// uLie -> As: eta -> eta, bracket -> mu - mu^op.
OperadMorphism phi_ulie_to_as();

} // namespace opq
