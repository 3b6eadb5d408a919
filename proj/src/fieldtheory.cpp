#include "opq/fieldtheory.hpp"

#include "opq/envelope.hpp"
#include "opq/errors.hpp"

#include <algorithm>
#include <deque>
#include <future>

namespace opq {

// ---------------------------------------------------------------- categories

OrthCategory::OrthCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                           const std::vector<std::array<std::string, 3>> &compose,
                           const std::vector<MorphismPair> &orth_seeds)
    : objects_(std::move(objects)) {
  std::set<std::string> obj(objects_.begin(), objects_.end());
  if (obj.size() != objects_.size()) throw StructuralError("duplicate object");
  for (const auto &o : objects_) morphisms_.emplace(identity(o), Morphism{identity(o), o, o});
  for (auto &m : morphisms) {
    if (!obj.count(m.src) || !obj.count(m.tgt)) throw StructuralError("morphism '" + m.name + "' has an unknown end");
    if (morphisms_.count(m.name)) {
      const Morphism &e = morphisms_.at(m.name);
      if (e.src == m.src && e.tgt == m.tgt && e.name == identity(m.src)) continue; // explicit identity
      throw StructuralError("duplicate morphism '" + m.name + "'");
    }
    morphisms_.emplace(m.name, m);
  }
  for (const auto &[g, f, gf] : compose) {
    const Morphism &mg = morphism(g), &mf = morphism(f), &mgf = morphism(gf);
    if (mg.src != mf.tgt) throw StructuralError("composition " + g + " o " + f + " of non-composable morphisms");
    if (mgf.src != mf.src || mgf.tgt != mg.tgt) throw StructuralError("composite " + gf + " has the wrong ends");
    auto [it, inserted] = compose_.emplace(MorphismPair{g, f}, gf);
    if (!inserted && it->second != gf) throw StructuralError("composition " + g + " o " + f + " given twice");
  }
  for (const auto &[name, m] : morphisms_) {
    auto check_unit = [&](const MorphismPair &key) {
      auto [it, inserted] = compose_.emplace(key, name);
      if (!inserted && it->second != name) throw StructuralError("identity law fails for '" + name + "'");
    };
    check_unit({identity(m.tgt), name});
    check_unit({name, identity(m.src)});
  }
  for (const auto &[g, mg] : morphisms_)
    for (const auto &[f, mf] : morphisms_)
      if (mg.src == mf.tgt && !compose_.count({g, f}))
        throw StructuralError("composition table has no entry for " + g + " o " + f);
  for (const auto &[h, mh] : morphisms_)
    for (const auto &[g, mg] : morphisms_) {
      if (mh.src != mg.tgt) continue;
      for (const auto &[f, mf] : morphisms_) {
        if (mg.src != mf.tgt) continue;
        if (compose_.at({h, compose_.at({g, f})}) != compose_.at({compose_.at({h, g}), f}))
          throw StructuralError("composition is not associative at " + h + ", " + g + ", " + f);
      }
    }
  orth_ = orth_closure(*this, orth_seeds);
}

const Morphism &OrthCategory::morphism(const std::string &name) const {
  auto it = morphisms_.find(name);
  if (it == morphisms_.end()) throw StructuralError("unknown morphism '" + name + "'");
  return it->second;
}

bool OrthCategory::has_object(const std::string &o) const {
  return std::find(objects_.begin(), objects_.end(), o) != objects_.end();
}

const std::string &OrthCategory::compose(const std::string &g, const std::string &f) const {
  auto it = compose_.find({g, f});
  if (it == compose_.end()) throw StructuralError(g + " o " + f + " is not defined");
  return it->second;
}

std::set<MorphismPair> orth_closure(const OrthCategory &base, const std::vector<MorphismPair> &seeds) {
  std::set<MorphismPair> out;
  std::deque<MorphismPair> queue;
  auto push = [&](MorphismPair p) {
    if (out.insert(p).second) queue.push_back(std::move(p));
  };
  for (const auto &[f1, f2] : seeds) {
    if (base.morphism(f1).tgt != base.morphism(f2).tgt)
      throw StructuralError("orthogonal pair (" + f1 + ", " + f2 + ") has no common target");
    push({f1, f2});
  }
  const auto &table = base.composition_table();
  while (!queue.empty()) {
    auto [f1, f2] = queue.front();
    queue.pop_front();
    push({f2, f1});
    for (const auto &[gf, comp] : table) {
      const auto &[g, f] = gf;
      if (f == f1) {
        // post-composition needs the same g on both sides
        if (auto other = table.find({g, f2}); other != table.end()) push({comp, other->second});
      }
      if (g == f1) push({comp, f2});
      if (g == f2) push({f1, comp});
    }
  }
  return out;
}

// ---------------------------------------------------------------- theories

const DgAlgebra &FieldTheory::algebra(const std::string &object) const {
  auto it = algebras.find(object);
  if (it == algebras.end()) throw StructuralError("no algebra assigned to object '" + object + "'");
  return it->second;
}

RationalMatrix FieldTheory::action(const std::string &morphism) const {
  auto it = actions.find(morphism);
  if (it != actions.end()) return it->second;
  const Morphism &m = base.morphism(morphism);
  if (m.name == base.identity(m.src)) return RationalMatrix::identity(algebra(m.src).dim());
  throw StructuralError("no action assigned to morphism '" + morphism + "'");
}

TheoryReport validate_theory(const FieldTheory &ft) {
  TheoryReport report;
  for (const auto &o : ft.base.objects()) {
    if (!ft.algebras.count(o)) {
      report.problems.push_back("object '" + o + "' has no algebra");
      continue;
    }
    const DgAlgebra &a = ft.algebras.at(o);
    if (a.kind() != ft.kind) report.problems.push_back("algebra of '" + o + "' has the wrong kind");
    AlgebraReport ar = validate_algebra(a);
    for (const auto &p : ar.problems) report.problems.push_back(o + ": " + p);
    if (!ar.relations.ok())
      report.problems.push_back(o + ": " + std::to_string(ar.relations.violations.size()) + " relation violations");
  }
  for (const auto &[name, _] : ft.algebras)
    if (!ft.base.has_object(name)) report.problems.push_back("algebra given for unknown object '" + name + "'");
  for (const auto &[name, _] : ft.actions)
    if (!ft.base.morphisms().count(name)) report.problems.push_back("action given for unknown morphism '" + name + "'");
  if (!report.problems.empty()) return report;
  for (const auto &[name, m] : ft.base.morphisms()) {
    RationalMatrix f;
    try {
      f = ft.action(name);
    } catch (const StructuralError &e) {
      report.problems.push_back(e.what());
      continue;
    }
    const DgAlgebra &s = ft.algebra(m.src), &t = ft.algebra(m.tgt);
    if (f.rows() != t.dim() || f.cols() != s.dim()) {
      report.problems.push_back("action of '" + name + "' has the wrong shape");
      continue;
    }
    if (name == ft.base.identity(m.src) && !f.is_identity())
      report.problems.push_back("identity '" + name + "' does not act as the identity");
    if (!is_algebra_morphism(f, s, t)) report.problems.push_back("action of '" + name + "' is not an algebra map");
  }
  if (!report.problems.empty()) return report;
  for (const auto &[gf, comp] : ft.base.composition_table())
    if (!(ft.action(gf.first) * ft.action(gf.second) == ft.action(comp)))
      report.problems.push_back("action does not respect " + gf.first + " o " + gf.second + " = " + comp);
  return report;
}

namespace {

struct PairResult {
  std::vector<CausalityViolation> violations;
  std::size_t checked = 0, skipped = 0;
};

PairResult check_pair(const FieldTheory &ft, const OperadPresentation &p, const std::string &f1,
                      const std::string &f2) {
  PairResult out;
  const Morphism &m1 = ft.base.morphism(f1), &m2 = ft.base.morphism(f2);
  const DgAlgebra &a1 = ft.algebra(m1.src), &a2 = ft.algebra(m2.src), &c = ft.algebra(m1.tgt);
  const RationalMatrix g1 = ft.action(f1).transpose(), g2 = ft.action(f2).transpose();
  const auto &r1 = p.distinguished_pair->first, &r2 = p.distinguished_pair->second;
  const auto &l1 = a1.filtration(), &l2 = a2.filtration();
  const auto bound = c.filtration() ? std::optional<std::size_t>(c.filtration()->bound) : std::nullopt;
  for (std::size_t x = 0; x < a1.dim(); ++x)
    for (std::size_t y = 0; y < a2.dim(); ++y) {
      if (bound && l1 && l2 && l1->length[x] + l2->length[y] > *bound) {
        ++out.skipped;
        continue;
      }
      std::vector<SparseVector> in{g1.row(x), g2.row(y)};
      try {
        SparseVector v1 = evaluate(r1, c, in, &p.alphabet), v2 = evaluate(r2, c, in, &p.alphabet);
        ++out.checked;
        if (v1 != v2) out.violations.push_back({f1, f2, x, y, std::move(v1), std::move(v2)});
      } catch (const TruncationOverflow &) {
        ++out.skipped;
      }
    }
  return out;
}

} // namespace

CausalityReport check_causality(const FieldTheory &ft, const std::optional<OperadPresentation> &bipointing) {
  const OperadPresentation p = bipointing ? *bipointing : named_presentation(ft.kind);
  if (!p.distinguished_pair) throw StructuralError("presentation has no distinguished pair");
  std::vector<std::future<PairResult>> jobs;
  for (const auto &[f1, f2] : ft.base.orth())
    jobs.push_back(std::async(std::launch::async, check_pair, std::cref(ft), std::cref(p), f1, f2));
  CausalityReport report;
  for (auto &j : jobs) {
    PairResult r = j.get();
    ++report.pairs;
    report.checked += r.checked;
    report.skipped += r.skipped;
    for (auto &v : r.violations) report.violations.push_back(std::move(v));
  }
  return report;
}

FieldTheory quantize(const FieldTheory &lft, std::size_t n) {
  if (lft.kind != OperadKind::uLie) throw StructuralError("quantization needs a uLie theory");
  std::map<std::string, TruncatedEnvelope> env;
  FieldTheory out{lft.base, OperadKind::As, {}, {}, n};
  for (const auto &o : lft.base.objects()) {
    env.emplace(o, TruncatedEnvelope(lft.algebra(o), n));
    out.algebras.emplace(o, env.at(o).as_dg_algebra());
  }
  for (const auto &[name, m] : lft.base.morphisms())
    out.actions.emplace(name, envelope_map(lft.action(name), env.at(m.src), env.at(m.tgt), n).flat());
  return out;
}

FieldTheory dequantize(const FieldTheory &qft) {
  if (qft.kind != OperadKind::As) throw StructuralError("dequantization needs an As theory");
  FieldTheory out{qft.base, OperadKind::uLie, {}, qft.actions, qft.truncation};
  for (const auto &[o, a] : qft.algebras) out.algebras.emplace(o, commutator_functor(a));
  return out;
}

// ---------------------------------------------------------------- W-constancy

bool WReport::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const WEntry &e) { return e.ok; });
}

std::pair<ChainComplex, std::vector<std::size_t>> filtration_stage(const DgAlgebra &a, std::size_t k) {
  if (!a.filtration()) throw StructuralError("algebra carries no filtration");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a.filtration()->length[i] <= k) keep.push_back(i);
  std::map<int, std::size_t> dims;
  std::vector<std::size_t> local(a.dim());
  for (auto i : keep) local[i] = dims[a.degree(i)]++;
  std::map<int, RationalMatrix> d;
  const RationalMatrix &flat = a.differential();
  const RationalMatrix dt = flat.transpose();
  std::vector<bool> kept(a.dim(), false);
  for (auto i : keep) kept[i] = true;
  for (auto i : keep)
    for (const auto &[r, c] : dt.row(i)) {
      if (!kept[r]) throw StructuralError("differential does not preserve the filtration");
      int p = a.degree(i);
      auto [it, _] = d.try_emplace(p, dims.count(p - 1) ? dims[p - 1] : 0, dims[p]);
      it->second.set(local[r], local[i], c);
    }
  return {ChainComplex(dims, d), keep};
}

ChainMap restrict_to_stage(const RationalMatrix &f, const DgAlgebra &src, const DgAlgebra &tgt, std::size_t k) {
  auto [sc, sk] = filtration_stage(src, k);
  auto [tc, tk] = filtration_stage(tgt, k);
  std::map<std::size_t, std::size_t> row_of;
  for (std::size_t i = 0; i < tk.size(); ++i) row_of.emplace(tk[i], i);
  const RationalMatrix ft = f.transpose();
  RationalMatrix out(tk.size(), sk.size());
  for (std::size_t j = 0; j < sk.size(); ++j)
    for (const auto &[r, c] : ft.row(sk[j])) {
      auto it = row_of.find(r);
      if (it == row_of.end()) throw StructuralError("map does not preserve the filtration");
      out.set(it->second, j, c);
    }
  return ChainMap::from_flat(sc, tc, out);
}

namespace {

WEntry check_one(const std::string &name, const ChainMap &f, WMode mode) {
  WEntry e{name, std::nullopt, true, std::nullopt, ""};
  if (mode == WMode::Homotopy) {
    QuasiIsoReport q = quasi_iso_report(f);
    if (!q.quasi_iso) {
      e.ok = false;
      e.witness_degree = q.witness_degree;
      e.detail = "homology dims " + std::to_string(q.source_homology) + " -> " + std::to_string(q.target_homology) +
                 ", induced rank " + std::to_string(q.induced_rank);
    }
    return e;
  }
  std::set<int> degrees;
  for (auto [n, k] : f.source().dims()) degrees.insert(n);
  for (auto [n, k] : f.target().dims()) degrees.insert(n);
  for (int n : degrees) {
    RationalMatrix c = f.component(n);
    if (f.source().dim(n) != f.target().dim(n) || (c.rows() > 0 && !inverse(c))) {
      e.ok = false;
      e.witness_degree = n;
      e.detail = "component in degree " + std::to_string(n) + " is not invertible";
      return e;
    }
  }
  return e;
}

} // namespace

WReport check_w_constancy(const FieldTheory &ft, const std::vector<std::string> &w, WMode mode) {
  WReport report;
  for (const auto &name : w) {
    const Morphism &m = ft.base.morphism(name);
    const DgAlgebra &s = ft.algebra(m.src), &t = ft.algebra(m.tgt);
    RationalMatrix f = ft.action(name);
    if (ft.truncation && s.filtration() && t.filtration()) {
      for (std::size_t k = 0; k <= *ft.truncation; ++k) {
        WEntry e = check_one(name, restrict_to_stage(f, s, t, k), mode);
        e.stage = k;
        report.entries.push_back(std::move(e));
      }
    } else {
      report.entries.push_back(check_one(name, ChainMap::from_flat(s.carrier(), t.carrier(), f), mode));
    }
  }
  return report;
}

// ---------------------------------------------------------------- pullback

namespace {

std::string image_of(const OrthCategory &source, const OrthCategory &target, const OrthFunctor &F,
                     const std::string &m) {
  auto it = F.morphisms.find(m);
  if (it != F.morphisms.end()) return it->second;
  const Morphism &mm = source.morphism(m);
  if (m == source.identity(mm.src)) return target.identity(F.objects.at(mm.src));
  throw StructuralError("functor has no image for morphism '" + m + "'");
}

} // namespace

void validate_orth_functor(const OrthCategory &source, const OrthCategory &target, const OrthFunctor &F) {
  for (const auto &o : source.objects()) {
    auto it = F.objects.find(o);
    if (it == F.objects.end() || !target.has_object(it->second))
      throw StructuralError("functor does not map object '" + o + "' into the target");
  }
  for (const auto &[name, m] : source.morphisms()) {
    const Morphism &img = target.morphism(image_of(source, target, F, name));
    if (img.src != F.objects.at(m.src) || img.tgt != F.objects.at(m.tgt))
      throw StructuralError("functor image of '" + name + "' has the wrong ends");
    if (name == source.identity(m.src) && img.name != target.identity(img.src))
      throw StructuralError("functor does not preserve the identity of '" + m.src + "'");
  }
  for (const auto &[gf, comp] : source.composition_table()) {
    std::string lhs = image_of(source, target, F, comp);
    std::string rhs = target.compose(image_of(source, target, F, gf.first), image_of(source, target, F, gf.second));
    if (lhs != rhs) throw StructuralError("functor does not preserve " + gf.first + " o " + gf.second);
  }
  for (const auto &[f1, f2] : source.orth())
    if (!target.is_orth(image_of(source, target, F, f1), image_of(source, target, F, f2)))
      throw StructuralError("functor does not preserve orthogonality of (" + f1 + ", " + f2 + ")");
}

FieldTheory pullback_theory(const OrthCategory &source, const OrthFunctor &F, const FieldTheory &ft) {
  validate_orth_functor(source, ft.base, F);
  FieldTheory out{source, ft.kind, {}, {}, ft.truncation};
  for (const auto &o : source.objects()) out.algebras.emplace(o, ft.algebra(F.objects.at(o)));
  for (const auto &[name, _] : source.morphisms())
    out.actions.emplace(name, ft.action(image_of(source, ft.base, F, name)));
  return out;
}

} // namespace opq
