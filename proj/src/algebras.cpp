#include "opq/algebras.hpp"

#include "opq/errors.hpp"

namespace opq {

namespace {

// Enumerates index tuples of length k over [0, n), pruned by the filtration.
template <class F> void for_each_tuple(const DgAlgebra &a, std::size_t k, F &&visit) {
  const auto &filt = a.filtration();
  std::vector<std::size_t> idx(k);
  auto rec = [&](auto &self, std::size_t pos, std::size_t used) -> void {
    if (pos == k) {
      visit(idx);
      return;
    }
    for (std::size_t i = 0; i < a.dim(); ++i) {
      std::size_t next = used + (filt ? filt->length[i] : 0);
      if (filt && k >= 2 && next > filt->bound) continue;
      idx[pos] = i;
      self(self, pos + 1, next);
    }
  };
  rec(rec, 0, 0);
}

} // namespace

DgAlgebra commutator_functor(const DgAlgebra &a) {
  if (a.kind() != OperadKind::As) throw StructuralError("commutator functor needs an As algebra");
  const MultilinearMap &mu = a.op(kMu);
  MultilinearMap bracket{2, {}};
  for (const auto &[in, v] : mu.table) {
    std::size_t i = in[0], j = in[1];
    int eps = koszul_sign(static_cast<long>(a.degree(i)) * a.degree(j));
    for (const auto &[k, c] : v) {
      bracket.add({i, j}, k, c);
      bracket.add({j, i}, k, -c * Rational(eps));
    }
  }
  std::map<std::string, MultilinearMap> ops{{kBracket, bracket}};
  if (a.has_op(kEta)) ops.emplace(kEta, a.op(kEta));
  return DgAlgebra(a.carrier(), OperadKind::uLie, std::move(ops), a.filtration());
}

Rational PresymplecticComplex::pair(std::size_t i, std::size_t j) const {
  auto it = omega.find({i, j});
  return it == omega.end() ? Rational(0) : it->second;
}

Rational PresymplecticComplex::pair(const SparseVector &v, const SparseVector &w) const {
  Rational out;
  for (const auto &[i, a] : v)
    for (const auto &[j, b] : w) {
      auto it = omega.find({i, j});
      if (it != omega.end()) out += a * b * it->second;
    }
  return out;
}

void PresymplecticComplex::set(std::size_t i, std::size_t j, const Rational &c) {
  if (c.is_zero())
    omega.erase({i, j});
  else
    omega[{i, j}] = c;
}

PresymplecticReport validate_presymplectic(const PresymplecticComplex &v) {
  PresymplecticReport report;
  const auto deg = v.carrier.flat_degrees();
  const std::size_t n = deg.size();
  const RationalMatrix d = v.carrier.flat_differential();
  for (const auto &[ij, c] : v.omega) {
    auto [i, j] = ij;
    if (i >= n || j >= n) {
      report.problems.push_back("omega index out of range");
      return report;
    }
    if (deg[i] + deg[j] != 0)
      report.problems.push_back("omega(" + std::to_string(i) + "," + std::to_string(j) + ") is not in total degree 0");
    Rational expected = -c * Rational(koszul_sign(static_cast<long>(deg[i]) * deg[j]));
    if (v.pair(j, i) != expected)
      report.problems.push_back("omega is not graded antisymmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
  }
  // ω(dx, y) + (-1)^{|x|} ω(x, dy) = 0
  const RationalMatrix dt = d.transpose();
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector dx = dt.row(i); // column i of d
    for (std::size_t j = 0; j < n; ++j) {
      if (deg[i] + deg[j] != 1) continue;
      Rational lhs = v.pair(dx, basis_vector(j)) + Rational(koszul_sign(deg[i])) * v.pair(basis_vector(i), dt.row(j));
      if (!lhs.is_zero())
        report.problems.push_back("omega is not a chain map at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  return report;
}

std::size_t heisenberg_index(const ChainComplex &carrier, std::size_t i) {
  return carrier.degree_of(i) > 0 ? i + 1 : i;
}

std::size_t heisenberg_unit_index(const ChainComplex &carrier) { return carrier.flat_offset(0) + carrier.dim(0); }

namespace {

ChainComplex with_unit(const ChainComplex &c) {
  auto dims = c.dims();
  dims[0] += 1;
  std::map<int, RationalMatrix> d;
  for (int n : {0, 1}) {
    RationalMatrix m = c.differential(n);
    RationalMatrix grown(dims.count(n - 1) ? dims[n - 1] : 0, dims.count(n) ? dims[n] : 0);
    for (const auto &t : m.triplets()) grown.set(t.row, t.col, t.value);
    if (!grown.is_zero()) d[n] = grown;
  }
  for (const auto &[n, m] : c.stored_differentials())
    if (n != 0 && n != 1) d[n] = m;
  return ChainComplex(dims, d);
}

} // namespace

DgAlgebra heisenberg(const PresymplecticComplex &v) {
  ChainComplex carrier = with_unit(v.carrier);
  const std::size_t unit = heisenberg_unit_index(v.carrier);
  MultilinearMap bracket{2, {}};
  for (const auto &[ij, c] : v.omega)
    bracket.add({heisenberg_index(v.carrier, ij.first), heisenberg_index(v.carrier, ij.second)}, unit, c);
  MultilinearMap eta{0, {}};
  eta.add({}, unit, Rational(1));
  return DgAlgebra(std::move(carrier), OperadKind::uLie, {{kBracket, bracket}, {kEta, eta}});
}

ChainMap heisenberg_map(const ChainMap &f) {
  ChainComplex src = with_unit(f.source()), tgt = with_unit(f.target());
  RationalMatrix flat = f.flat();
  RationalMatrix out(tgt.total_dim(), src.total_dim());
  for (const auto &t : flat.triplets())
    out.set(heisenberg_index(f.target(), t.row), heisenberg_index(f.source(), t.col), t.value);
  out.set(heisenberg_unit_index(f.target()), heisenberg_unit_index(f.source()), Rational(1));
  return ChainMap::from_flat(src, tgt, out);
}

bool preserves_pairing(const ChainMap &f, const PresymplecticComplex &v, const PresymplecticComplex &w) {
  RationalMatrix ft = f.flat().transpose();
  const std::size_t n = v.carrier.total_dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (w.pair(ft.row(i), ft.row(j)) != v.pair(i, j)) return false;
  return true;
}

AlgebraReport validate_algebra(const DgAlgebra &a) {
  AlgebraReport report;
  OperadPresentation p = named_presentation(a.kind());
  for (const auto &g : p.alphabet.generators())
    if (!a.has_op(g.name)) report.problems.push_back("missing structure map '" + g.name + "'");
  for (const auto &[name, m] : a.ops()) {
    if (!p.alphabet.contains(name)) {
      report.problems.push_back("structure map '" + name + "' is not a generator of " + to_string(a.kind()));
      continue;
    }
    if (p.alphabet.at(name).arity() != m.arity)
      report.problems.push_back("structure map '" + name + "' has the wrong arity");
  }
  if (!report.problems.empty()) return report;
  if (!validate_complex(a.carrier()).ok()) report.problems.push_back("carrier is not a complex");

  for (const auto &[name, m] : a.ops()) {
    for (const auto &[in, v] : m.table) {
      int expected = 0;
      for (auto i : in) expected += a.degree(i);
      for (const auto &[k, c] : v)
        if (a.degree(k) != expected) {
          report.problems.push_back("structure map '" + name + "' is not of degree 0");
          break;
        }
    }
    // d(op(x1..xk)) = Σ_i (-1)^{|x1|+..+|x_{i-1}|} op(x1..dxi..xk)
    bool chain = true;
    for_each_tuple(a, m.arity, [&](const std::vector<std::size_t> &idx) {
      if (!chain) return;
      try {
        SparseVector lhs = a.d(a.apply_basis(name, idx));
        std::vector<SparseVector> args;
        for (auto i : idx) args.push_back(basis_vector(i));
        int before = 0;
        for (std::size_t pos = 0; pos < idx.size(); ++pos) {
          SparseVector saved = args[pos];
          args[pos] = a.d(saved);
          if (!args[pos].empty()) add_scaled(lhs, a.apply(name, args), Rational(-koszul_sign(before)));
          args[pos] = saved;
          before += a.degree(idx[pos]);
        }
        if (!lhs.empty()) chain = false;
      } catch (const TruncationOverflow &) {
      }
    });
    if (!chain) report.problems.push_back("differential is not a derivation of '" + name + "'");
  }
  report.relations = check_relations(p, a);
  return report;
}

bool is_algebra_morphism(const RationalMatrix &f, const DgAlgebra &a, const DgAlgebra &b) {
  if (f.rows() != b.dim() || f.cols() != a.dim()) return false;
  if (!((f * a.differential()) == (b.differential() * f))) return false;
  for (const auto &t : f.triplets())
    if (a.degree(t.col) != b.degree(t.row)) return false;
  const RationalMatrix ft = f.transpose();
  for (const auto &[name, m] : a.ops()) {
    if (!b.has_op(name)) return false;
    bool ok = true;
    for_each_tuple(a, m.arity, [&](const std::vector<std::size_t> &idx) {
      if (!ok) return;
      try {
        SparseVector lhs = f.apply(a.apply_basis(name, idx));
        std::vector<SparseVector> images;
        for (auto i : idx) images.push_back(ft.row(i));
        add_scaled(lhs, b.apply(name, images), Rational(-1));
        if (!lhs.empty()) ok = false;
      } catch (const TruncationOverflow &) {
      }
    });
    if (!ok) return false;
  }
  return true;
}

} // namespace opq
