#include "opq/dg_algebra.hpp"

#include "opq/errors.hpp"

namespace opq {

std::string to_string(OperadKind kind) {
  switch (kind) {
  case OperadKind::As: return "As";
  case OperadKind::Lie: return "Lie";
  case OperadKind::uLie: return "uLie";
  case OperadKind::Pois: return "Pois";
  }
  return "?";
}

OperadKind parse_kind(const std::string &name) {
  if (name == "As") return OperadKind::As;
  if (name == "Lie") return OperadKind::Lie;
  if (name == "uLie") return OperadKind::uLie;
  if (name == "Pois") return OperadKind::Pois;
  throw ParseError("unknown operad kind '" + name + "'");
}

void MultilinearMap::add(std::vector<std::size_t> inputs, std::size_t output, const Rational &c) {
  if (inputs.size() != arity) throw StructuralError("multilinear map: wrong number of inputs");
  if (c.is_zero()) return;
  auto &v = table[std::move(inputs)];
  add_entry(v, output, c);
}

DgAlgebra::DgAlgebra(ChainComplex carrier, OperadKind kind, std::map<std::string, MultilinearMap> ops,
                     std::optional<WordFiltration> filtration)
    : carrier_(std::move(carrier)), kind_(kind), ops_(std::move(ops)), filtration_(std::move(filtration)),
      degrees_(carrier_.flat_degrees()), d_(carrier_.flat_differential()) {
  const std::size_t n = degrees_.size();
  for (auto &[name, m] : ops_) {
    for (auto it = m.table.begin(); it != m.table.end();) {
      if (it->first.size() != m.arity) throw StructuralError("structure map '" + name + "' has an entry of wrong arity");
      for (auto i : it->first)
        if (i >= n) throw StructuralError("structure map '" + name + "' input index out of range");
      if (!it->second.empty() && it->second.rbegin()->first >= n)
        throw StructuralError("structure map '" + name + "' output index out of range");
      it = it->second.empty() ? m.table.erase(it) : std::next(it);
    }
  }
  if (filtration_ && filtration_->length.size() != n) throw StructuralError("filtration length table has wrong size");
}

const MultilinearMap &DgAlgebra::op(const std::string &name) const {
  auto it = ops_.find(name);
  if (it == ops_.end()) throw StructuralError("algebra has no structure map '" + name + "'");
  return it->second;
}

bool DgAlgebra::fits(std::span<const std::size_t> inputs) const {
  if (!filtration_ || inputs.size() < 2) return true;
  std::size_t total = 0;
  for (auto i : inputs) total += filtration_->length[i];
  return total <= filtration_->bound;
}

SparseVector DgAlgebra::apply_basis(const std::string &name, std::span<const std::size_t> inputs) const {
  const MultilinearMap &m = op(name);
  if (inputs.size() != m.arity) throw StructuralError("structure map '" + name + "' applied to wrong number of inputs");
  if (!fits(inputs)) throw TruncationOverflow("product exceeds truncation bound " + std::to_string(filtration_->bound));
  auto it = m.table.find(std::vector<std::size_t>(inputs.begin(), inputs.end()));
  return it == m.table.end() ? SparseVector{} : it->second;
}

SparseVector DgAlgebra::apply(const std::string &name, std::span<const SparseVector> args) const {
  const MultilinearMap &m = op(name);
  if (args.size() != m.arity) throw StructuralError("structure map '" + name + "' applied to wrong number of inputs");
  SparseVector out;
  std::vector<std::size_t> idx(args.size());
  // iterate over all combinations of nonzero input coordinates
  auto rec = [&](auto &self, std::size_t pos, const Rational &coeff) -> void {
    if (pos == args.size()) {
      add_scaled(out, apply_basis(name, idx), coeff);
      return;
    }
    for (const auto &[i, c] : args[pos]) {
      idx[pos] = i;
      self(self, pos + 1, coeff * c);
    }
  };
  rec(rec, 0, Rational(1));
  return out;
}

SparseVector DgAlgebra::unit() const { return apply(kEta, {}); }

std::map<int, SparseVector> homogeneous_parts(const SparseVector &v, const std::vector<int> &degrees) {
  std::map<int, SparseVector> out;
  for (const auto &[i, c] : v) out[degrees.at(i)].emplace(i, c);
  return out;
}

} // namespace opq
