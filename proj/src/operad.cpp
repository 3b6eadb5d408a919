#include "opq/operad.hpp"

#include "opq/errors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace opq {

// ---------------------------------------------------------------- alphabet

GeneratorAlphabet::GeneratorAlphabet(std::set<std::string> colors, std::vector<Generator> generators)
    : colors_(std::move(colors)), generators_(std::move(generators)) {
  std::set<std::string> names;
  for (const auto &g : generators_) {
    if (!names.insert(g.name).second) throw StructuralError("duplicate generator '" + g.name + "'");
    if (!colors_.count(g.output_color)) throw StructuralError("generator '" + g.name + "' has undeclared output color");
    for (const auto &c : g.input_colors)
      if (!colors_.count(c)) throw StructuralError("generator '" + g.name + "' has undeclared input color '" + c + "'");
  }
}

GeneratorAlphabet GeneratorAlphabet::single_colored(const std::vector<std::pair<std::string, std::size_t>> &gens) {
  std::vector<Generator> out;
  for (const auto &[name, arity] : gens)
    out.push_back({name, std::vector<std::string>(arity, kDefaultColor), kDefaultColor, 0});
  return GeneratorAlphabet({kDefaultColor}, std::move(out));
}

const Generator &GeneratorAlphabet::at(const std::string &name) const {
  for (const auto &g : generators_)
    if (g.name == name) return g;
  throw StructuralError("unknown generator '" + name + "'");
}

bool GeneratorAlphabet::contains(const std::string &name) const {
  return std::any_of(generators_.begin(), generators_.end(), [&](const Generator &g) { return g.name == name; });
}

// ---------------------------------------------------------------- trees

std::strong_ordering operator<=>(const OperadTree::Node &a, const OperadTree::Node &b) {
  if (auto c = a.is_leaf <=> b.is_leaf; c != 0) return c;
  if (auto c = a.op <=> b.op; c != 0) return c;
  if (auto c = a.color <=> b.color; c != 0) return c;
  if (auto c = a.label <=> b.label; c != 0) return c;
  return std::lexicographical_compare_three_way(a.children.begin(), a.children.end(), b.children.begin(),
                                                b.children.end());
}

OperadTree OperadTree::leaf(std::size_t label, std::string color) {
  if (label == 0) throw StructuralError("leaf labels start at 1");
  Node n;
  n.is_leaf = true;
  n.label = label;
  n.color = std::move(color);
  return OperadTree(std::move(n));
}

OperadTree OperadTree::op(std::string name, std::vector<OperadTree> children, std::string color) {
  Node n;
  n.is_leaf = false;
  n.op = std::move(name);
  n.color = std::move(color);
  n.label = 0;
  for (auto &c : children) n.children.push_back(std::move(c.root_));
  return OperadTree(std::move(n));
}

namespace {

void collect_leaves(const OperadTree::Node &n, std::vector<const OperadTree::Node *> &out) {
  if (n.is_leaf) {
    out.push_back(&n);
    return;
  }
  for (const auto &c : n.children) collect_leaves(c, out);
}

int node_degree(const OperadTree::Node &n, const GeneratorAlphabet &alphabet) {
  if (n.is_leaf) return 0;
  int d = alphabet.at(n.op).degree;
  for (const auto &c : n.children) d += node_degree(c, alphabet);
  return d;
}

void check_node(const OperadTree::Node &n, const GeneratorAlphabet &alphabet) {
  if (!alphabet.colors().count(n.color)) throw StructuralError("undeclared color '" + n.color + "' in tree");
  if (n.is_leaf) return;
  const Generator &g = alphabet.at(n.op);
  if (g.arity() != n.children.size())
    throw StructuralError("generator '" + n.op + "' expects " + std::to_string(g.arity()) + " inputs, got " +
                          std::to_string(n.children.size()));
  if (g.output_color != n.color) throw StructuralError("generator '" + n.op + "' output color mismatch");
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (n.children[i].color != g.input_colors[i])
      throw StructuralError("color mismatch at input " + std::to_string(i + 1) + " of '" + n.op + "'");
    check_node(n.children[i], alphabet);
  }
}

void node_str(const OperadTree::Node &n, std::string &out) {
  if (n.is_leaf) {
    out += "slot(" + std::to_string(n.label) + ")";
    return;
  }
  out += n.op + "(";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ", ";
    node_str(n.children[i], out);
  }
  out += ")";
}

void check_permutation(std::span<const std::size_t> sigma) {
  std::vector<bool> seen(sigma.size() + 1, false);
  for (auto s : sigma) {
    if (s == 0 || s > sigma.size() || seen[s]) throw StructuralError("not a permutation of 1..n");
    seen[s] = true;
  }
}

} // namespace

std::size_t OperadTree::arity() const {
  std::vector<const Node *> leaves;
  collect_leaves(root_, leaves);
  return leaves.size();
}

std::vector<std::size_t> OperadTree::planar_labels() const {
  std::vector<const Node *> leaves;
  collect_leaves(root_, leaves);
  std::vector<std::size_t> out;
  for (auto *l : leaves) out.push_back(l->label);
  return out;
}

std::vector<std::string> OperadTree::input_colors() const {
  std::vector<const Node *> leaves;
  collect_leaves(root_, leaves);
  std::vector<std::string> out(leaves.size());
  for (auto *l : leaves)
    if (l->label >= 1 && l->label <= leaves.size()) out[l->label - 1] = l->color;
  return out;
}

int OperadTree::degree(const GeneratorAlphabet &alphabet) const { return node_degree(root_, alphabet); }

void OperadTree::check(const GeneratorAlphabet &alphabet) const {
  check_node(root_, alphabet);
  check_permutation(planar_labels());
}

std::string OperadTree::str() const {
  std::string out;
  node_str(root_, out);
  return out;
}

OperadTree graft(const OperadTree &outer, const std::vector<OperadTree> &inners) {
  const std::size_t n = outer.arity();
  if (inners.size() != n)
    throw StructuralError("graft: outer tree has arity " + std::to_string(n) + " but " + std::to_string(inners.size()) +
                          " inner trees were given");
  std::vector<std::size_t> offset(n, 0);
  for (std::size_t k = 1; k < n; ++k) offset[k] = offset[k - 1] + inners[k - 1].arity();
  auto relabel = [](auto &self, OperadTree::Node &node, std::size_t off) -> void {
    if (node.is_leaf) {
      node.label += off;
      return;
    }
    for (auto &c : node.children) self(self, c, off);
  };
  auto replace = [&](auto &self, const OperadTree::Node &node) -> OperadTree::Node {
    if (node.is_leaf) {
      const OperadTree &inner = inners.at(node.label - 1);
      if (inner.color() != node.color)
        throw StructuralError("graft: color mismatch at input " + std::to_string(node.label));
      OperadTree::Node copy = inner.root();
      relabel(relabel, copy, offset[node.label - 1]);
      return copy;
    }
    OperadTree::Node copy;
    copy.is_leaf = false;
    copy.op = node.op;
    copy.color = node.color;
    copy.label = 0;
    for (const auto &c : node.children) copy.children.push_back(self(self, c));
    return copy;
  };
  return OperadTree(replace(replace, outer.root()));
}

OperadTree permute(const OperadTree &t, std::span<const std::size_t> sigma) {
  if (sigma.size() != t.arity()) throw StructuralError("permute: permutation size does not match arity");
  check_permutation(sigma);
  std::vector<std::size_t> inv(sigma.size() + 1);
  for (std::size_t i = 0; i < sigma.size(); ++i) inv[sigma[i]] = i + 1;
  OperadTree::Node root = t.root();
  auto relabel = [&](auto &self, OperadTree::Node &node) -> void {
    if (node.is_leaf) {
      node.label = inv[node.label];
      return;
    }
    for (auto &c : node.children) self(self, c);
  };
  relabel(relabel, root);
  return OperadTree(std::move(root));
}

// ---------------------------------------------------------------- combinations

void TreeCombination::add(OperadTree t, const Rational &c) {
  if (c.is_zero()) return;
  if (!terms_.empty() && terms_.begin()->first.arity() != t.arity())
    throw StructuralError("tree combination mixes arities");
  auto [it, inserted] = terms_.try_emplace(std::move(t), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TreeCombination &TreeCombination::operator+=(const TreeCombination &o) {
  for (const auto &[t, c] : o.terms_) add(t, c);
  return *this;
}

TreeCombination operator-(TreeCombination a, const TreeCombination &b) {
  for (const auto &[t, c] : b.terms_) a.add(t, -c);
  return a;
}

TreeCombination operator*(const Rational &c, const TreeCombination &a) {
  TreeCombination out;
  for (const auto &[t, x] : a.terms_) out.add(t, c * x);
  return out;
}

std::string TreeCombination::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto &[t, c] : terms_) {
    Rational mag = c.sign() < 0 ? -c : c;
    if (first)
      out += c.sign() < 0 ? "-" : "";
    else
      out += c.sign() < 0 ? " - " : " + ";
    if (mag != Rational(1)) out += mag.str() + "*";
    out += t.str();
    first = false;
  }
  return out;
}

TreeCombination graft(const TreeCombination &outer, const std::vector<TreeCombination> &inners) {
  TreeCombination out;
  std::vector<OperadTree> pick(inners.size(), OperadTree::unit());
  for (const auto &[t, c] : outer.terms()) {
    auto rec = [&](auto &self, std::size_t pos, const Rational &coeff) -> void {
      if (pos == inners.size()) {
        out.add(graft(t, pick), coeff);
        return;
      }
      for (const auto &[s, x] : inners[pos].terms()) {
        pick[pos] = s;
        self(self, pos + 1, coeff * x);
      }
    };
    rec(rec, 0, c);
  }
  return out;
}

TreeCombination permute(const TreeCombination &t, std::span<const std::size_t> sigma) {
  TreeCombination out;
  for (const auto &[s, c] : t.terms()) out.add(permute(s, sigma), c);
  return out;
}

// ---------------------------------------------------------------- text format

namespace {

class Parser {
public:
  explicit Parser(const std::string &text) : s_(text) {}

  TreeCombination combination() {
    TreeCombination out;
    skip();
    if (peek() == '0' && is_bare_zero()) {
      ++pos_;
      expect_end();
      return out;
    }
    bool first = true;
    while (true) {
      skip();
      Rational sign(1);
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? Rational(-1) : Rational(1);
        ++pos_;
      } else if (!first) {
        break;
      }
      first = false;
      skip();
      Rational coeff(1);
      std::size_t save = pos_;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        std::string num = digits();
        if (peek() == '/') {
          ++pos_;
          num += "/" + digits();
        }
        skip();
        if (peek() == '*') {
          ++pos_;
          coeff = Rational::parse(num);
        } else {
          pos_ = save;
        }
      }
      out.add(tree(), sign * coeff);
      skip();
      if (pos_ >= s_.size()) break;
    }
    expect_end();
    return out;
  }

  OperadTree tree() {
    skip();
    if (std::isdigit(static_cast<unsigned char>(peek()))) return OperadTree::leaf(std::stoul(digits()));
    std::string name = ident();
    if (name.empty()) fail("expected a tree");
    skip();
    if (peek() != '(') fail("expected '(' after '" + name + "'");
    ++pos_;
    if (name == "slot") {
      skip();
      std::string num = digits();
      if (num.empty()) fail("expected a slot number");
      skip();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return OperadTree::leaf(std::stoul(num));
    }
    std::vector<OperadTree> children;
    skip();
    if (peek() != ')') {
      while (true) {
        children.push_back(tree());
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    skip();
    if (peek() != ')') fail("expected ')' or ','");
    ++pos_;
    return OperadTree::op(name, std::move(children));
  }

  void expect_end() {
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
  }

private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool is_bare_zero() const {
    std::size_t p = pos_ + 1;
    while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
    return p == s_.size();
  }
  std::string digits() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  std::string ident() {
    std::size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return s_.substr(start, pos_ - start);
  }
  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
  }

  const std::string &s_;
  std::size_t pos_ = 0;
};

} // namespace

TreeCombination parse_combination(const std::string &text) { return Parser(text).combination(); }

OperadTree parse_tree(const std::string &text) {
  Parser p(text);
  OperadTree t = p.tree();
  p.expect_end();
  return t;
}

// ---------------------------------------------------------------- presentations

void check_presentation(const OperadPresentation &p) {
  auto check_side = [&](const TreeCombination &c) -> std::optional<std::pair<std::size_t, std::vector<std::string>>> {
    if (c.is_zero()) return std::nullopt;
    for (const auto &[t, x] : c.terms()) t.check(p.alphabet);
    const OperadTree &t = c.terms().begin()->first;
    return std::make_pair(t.arity(), t.input_colors());
  };
  for (const auto &r : p.relations) {
    auto a = check_side(r.lhs), b = check_side(r.rhs);
    if (a && b && *a != *b) throw StructuralError("relation '" + r.name + "' has mismatched arity or colors");
  }
  if (p.distinguished_pair) {
    for (const auto *side : {&p.distinguished_pair->first, &p.distinguished_pair->second}) {
      auto s = check_side(*side);
      if (s && s->first != 2) throw StructuralError("distinguished pair must consist of arity-2 operations");
    }
  }
}

namespace {

OperadTree s(std::size_t i) { return OperadTree::leaf(i); }
OperadTree bin(const char *name, OperadTree a, OperadTree b) { return OperadTree::op(name, {std::move(a), std::move(b)}); }
OperadTree eta() { return OperadTree::op(kEta, {}); }

void add_as_relations(std::vector<Relation> &rels) {
  rels.push_back({"left_unit", bin(kMu, eta(), s(1)), s(1)});
  rels.push_back({"right_unit", bin(kMu, s(1), eta()), s(1)});
  rels.push_back({"associativity", bin(kMu, bin(kMu, s(1), s(2)), s(3)), bin(kMu, s(1), bin(kMu, s(2), s(3)))});
}

void add_lie_relations(std::vector<Relation> &rels, const char *b, const std::string &prefix) {
  rels.push_back({prefix + "antisymmetry", bin(b, s(1), s(2)), Rational(-1) * TreeCombination(bin(b, s(2), s(1)))});
  TreeCombination jac(bin(b, s(1), bin(b, s(2), s(3))));
  jac += TreeCombination(bin(b, s(2), bin(b, s(3), s(1))));
  jac += TreeCombination(bin(b, s(3), bin(b, s(1), s(2))));
  rels.push_back({prefix + "jacobi", jac, TreeCombination()});
}

TreeCombination binary_pair(const char *b) { return TreeCombination(bin(b, s(1), s(2))); }

} // namespace

OperadPresentation named_presentation(OperadKind which) {
  OperadPresentation p;
  switch (which) {
  case OperadKind::As: {
    p.alphabet = GeneratorAlphabet::single_colored({{kMu, 2}, {kEta, 0}});
    add_as_relations(p.relations);
    p.distinguished_pair = {binary_pair(kMu) - TreeCombination(bin(kMu, s(2), s(1))), TreeCombination()};
    break;
  }
  case OperadKind::Lie: {
    p.alphabet = GeneratorAlphabet::single_colored({{kBracket, 2}});
    add_lie_relations(p.relations, kBracket, "");
    p.distinguished_pair = {binary_pair(kBracket), TreeCombination()};
    break;
  }
  case OperadKind::uLie: {
    p.alphabet = GeneratorAlphabet::single_colored({{kBracket, 2}, {kEta, 0}});
    add_lie_relations(p.relations, kBracket, "");
    p.relations.push_back({"unit_bracket", bin(kBracket, s(1), eta()), TreeCombination()});
    p.distinguished_pair = {binary_pair(kBracket), TreeCombination()};
    break;
  }
  case OperadKind::Pois: {
    p.alphabet = GeneratorAlphabet::single_colored({{kMu, 2}, {kEta, 0}, {kPoisson, 2}});
    add_as_relations(p.relations);
    add_lie_relations(p.relations, kPoisson, "poisson_");
    p.relations.push_back({"commutativity", bin(kMu, s(1), s(2)), bin(kMu, s(2), s(1))});
    TreeCombination leibniz(bin(kMu, bin(kPoisson, s(1), s(2)), s(3)));
    leibniz += TreeCombination(bin(kMu, s(2), bin(kPoisson, s(1), s(3))));
    p.relations.push_back({"derivation", bin(kPoisson, s(1), bin(kMu, s(2), s(3))), leibniz});
    p.relations.push_back({"unit_bracket", bin(kPoisson, s(1), eta()), TreeCombination()});
    p.distinguished_pair = {binary_pair(kPoisson), TreeCombination()};
    break;
  }
  }
  check_presentation(p);
  return p;
}

OperadPresentation as_with_opposite_pair() {
  OperadPresentation p = named_presentation(OperadKind::As);
  p.distinguished_pair = {binary_pair(kMu), TreeCombination(bin(kMu, s(2), s(1)))};
  return p;
}

// ---------------------------------------------------------------- evaluation

namespace {

struct Evaluated {
  SparseVector value;
  int op_degree = 0;
  int input_degree = 0;
};

Evaluated eval_planar(const OperadTree::Node &node, const DgAlgebra &a, std::span<const SparseVector> inputs,
                      std::span<const int> degrees, std::size_t &pos, const GeneratorAlphabet *alphabet) {
  if (node.is_leaf) {
    Evaluated e{inputs[pos], 0, degrees[pos]};
    ++pos;
    return e;
  }
  std::vector<SparseVector> args;
  Evaluated out;
  int sign_exp = 0, seen_inputs = 0;
  for (const auto &child : node.children) {
    Evaluated c = eval_planar(child, a, inputs, degrees, pos, alphabet);
    sign_exp += c.op_degree * seen_inputs;
    seen_inputs += c.input_degree;
    out.op_degree += c.op_degree;
    args.push_back(std::move(c.value));
  }
  out.input_degree = seen_inputs;
  if (alphabet) out.op_degree += alphabet->at(node.op).degree;
  bool any_zero = std::any_of(args.begin(), args.end(), [](const SparseVector &v) { return v.empty(); });
  if (!any_zero) {
    out.value = a.apply(node.op, args);
    if (sign_exp % 2 != 0) out.value = scaled(out.value, Rational(-1));
  }
  return out;
}

SparseVector eval_homogeneous(const OperadTree &t, const DgAlgebra &a, std::span<const SparseVector> inputs,
                              std::span<const int> degrees, const GeneratorAlphabet *alphabet) {
  std::vector<std::size_t> labels = t.planar_labels();
  std::vector<SparseVector> planar;
  std::vector<int> planar_deg;
  for (auto l : labels) {
    planar.push_back(inputs[l - 1]);
    planar_deg.push_back(degrees[l - 1]);
  }
  int sign_exp = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] > labels[j]) sign_exp += degrees[labels[i] - 1] * degrees[labels[j] - 1];
  std::size_t pos = 0;
  SparseVector v = eval_planar(t.root(), a, planar, planar_deg, pos, alphabet).value;
  return sign_exp % 2 == 0 ? v : scaled(v, Rational(-1));
}

} // namespace

SparseVector evaluate(const OperadTree &t, const DgAlgebra &a, std::span<const SparseVector> inputs,
                      const GeneratorAlphabet *alphabet) {
  const std::size_t n = t.arity();
  if (inputs.size() != n)
    throw StructuralError("evaluate: tree of arity " + std::to_string(n) + " given " + std::to_string(inputs.size()) +
                          " inputs");
  std::vector<std::vector<std::pair<int, SparseVector>>> parts(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto &[deg, v] : homogeneous_parts(inputs[i], a.degrees())) parts[i].emplace_back(deg, std::move(v));
  SparseVector out;
  std::vector<SparseVector> pick(n);
  std::vector<int> degs(n);
  auto rec = [&](auto &self, std::size_t pos) -> void {
    if (pos == n) {
      add_scaled(out, eval_homogeneous(t, a, pick, degs, alphabet), Rational(1));
      return;
    }
    for (const auto &[deg, v] : parts[pos]) {
      pick[pos] = v;
      degs[pos] = deg;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  return out;
}

SparseVector evaluate(const TreeCombination &expr, const DgAlgebra &a, std::span<const SparseVector> inputs,
                      const GeneratorAlphabet *alphabet) {
  SparseVector out;
  for (const auto &[t, c] : expr.terms()) add_scaled(out, evaluate(t, a, inputs, alphabet), c);
  return out;
}

RelationReport check_relation(const Relation &r, const DgAlgebra &a, const GeneratorAlphabet *alphabet) {
  RelationReport report;
  const TreeCombination &probe = r.lhs.is_zero() ? r.rhs : r.lhs;
  if (probe.is_zero()) return report;
  const std::size_t k = probe.terms().begin()->first.arity();
  const std::size_t n = a.dim();
  const auto &filt = a.filtration();
  std::vector<std::size_t> idx(k);
  std::vector<SparseVector> inputs(k);
  auto rec = [&](auto &self, std::size_t pos, std::size_t used) -> void {
    if (pos == k) {
      try {
        SparseVector diff = evaluate(r.lhs, a, inputs, alphabet);
        add_scaled(diff, evaluate(r.rhs, a, inputs, alphabet), Rational(-1));
        ++report.checked;
        if (!diff.empty()) report.violations.push_back({r.name, idx, std::move(diff)});
      } catch (const TruncationOverflow &) {
        ++report.skipped;
      }
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t next = used + (filt ? filt->length[i] : 0);
      if (filt && k >= 2 && next > filt->bound) {
        ++report.skipped;
        continue;
      }
      idx[pos] = i;
      inputs[pos] = basis_vector(i);
      self(self, pos + 1, next);
    }
  };
  rec(rec, 0, 0);
  return report;
}

RelationReport check_relations(const OperadPresentation &p, const DgAlgebra &a) {
  RelationReport total;
  for (const auto &r : p.relations) {
    RelationReport one = check_relation(r, a, &p.alphabet);
    total.checked += one.checked;
    total.skipped += one.skipped;
    for (auto &v : one.violations) total.violations.push_back(std::move(v));
  }
  return total;
}

// ---------------------------------------------------------------- morphisms

namespace {

TreeCombination image_planar(const OperadMorphism &phi, const OperadTree::Node &node) {
  if (node.is_leaf) return TreeCombination(OperadTree::leaf(1, node.color));
  auto it = phi.images.find(node.op);
  if (it == phi.images.end()) throw StructuralError("morphism has no image for generator '" + node.op + "'");
  std::vector<TreeCombination> children;
  for (const auto &c : node.children) children.push_back(image_planar(phi, c));
  return graft(it->second, children);
}

} // namespace

TreeCombination apply_morphism(const OperadMorphism &phi, const OperadTree &t) {
  TreeCombination planar = image_planar(phi, t.root());
  std::vector<std::size_t> labels = t.planar_labels();
  // leaf at planar position k must end up labeled labels[k-1]
  std::vector<std::size_t> sigma(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) sigma[labels[k] - 1] = k + 1;
  return permute(planar, sigma);
}

TreeCombination apply_morphism(const OperadMorphism &phi, const TreeCombination &t) {
  TreeCombination out;
  for (const auto &[tree, c] : t.terms()) out += c * apply_morphism(phi, tree);
  return out;
}

OperadMorphism phi_ulie_to_as() {
  OperadMorphism phi;
  phi.source = named_presentation(OperadKind::uLie).alphabet;
  phi.target = named_presentation(OperadKind::As).alphabet;
  phi.images.emplace(kEta, TreeCombination(eta()));
  phi.images.emplace(kBracket, TreeCombination(bin(kMu, s(1), s(2))) - TreeCombination(bin(kMu, s(2), s(1))));
  return phi;
}

} // namespace opq
