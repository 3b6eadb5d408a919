#include "fixtures.hpp"
#include "opq/envelope.hpp"
#include "opq/errors.hpp"
#include "opq/fieldtheory.hpp"

#include <doctest.h>

using namespace opq;
using namespace opq::testing;

namespace {

// A, B -> C -> D with g composable after both f1 and f2.
OrthCategory fan(const std::vector<MorphismPair> &seeds) {
  return OrthCategory({"A", "B", "C", "D"}, {{"f1", "A", "C"}, {"f2", "B", "C"}, {"g", "C", "D"}, {"gf1", "A", "D"},
                                             {"gf2", "B", "D"}},
                      {{{"g", "f1", "gf1"}}, {{"g", "f2", "gf2"}}}, seeds);
}

std::set<MorphismPair> nonidentity(const std::set<MorphismPair> &s) {
  std::set<MorphismPair> out;
  for (const auto &p : s)
    if (p.first.rfind("id_", 0) != 0 && p.second.rfind("id_", 0) != 0) out.insert(p);
  return out;
}

// abelian uLie theory U -> M given a chain map between carriers
FieldTheory abelian_theory(const ChainComplex &u, const ChainComplex &m, const RationalMatrix &f) {
  OrthCategory c({"U", "M"}, {{"f", "U", "M"}}, {}, {});
  FieldTheory ft{c, OperadKind::uLie, {}, {}, std::nullopt};
  ft.algebras.emplace("U", abelian_ulie(u));
  ft.algebras.emplace("M", abelian_ulie(m));
  ft.actions.emplace("f", heisenberg_map(ChainMap::from_flat(u, m, f)).flat());
  return ft;
}

} // namespace

TEST_CASE("orthogonality closure") {
  CHECK(toy_category(false).orth().empty());
  OrthCategory toy = toy_category();
  CHECK(toy.orth() == std::set<MorphismPair>{{"iL", "iR"}, {"iR", "iL"}});

  OrthCategory c = fan({{"f1", "f2"}});
  CHECK(c.orth().count({"gf1", "gf2"}));
  CHECK(c.orth().count({"gf2", "gf1"}));
  CHECK(nonidentity(c.orth()).size() == 4);
  std::vector<MorphismPair> again(c.orth().begin(), c.orth().end());
  CHECK(orth_closure(c, again) == c.orth());
  // fixpoint: every pre/post-composite of an orth pair is orth
  for (const auto &[f1, f2] : c.orth()) {
    CHECK(c.is_orth(f2, f1));
    for (const auto &[g, mg] : c.morphisms())
      if (mg.src == c.morphism(f1).tgt) CHECK(c.is_orth(c.compose(g, f1), c.compose(g, f2)));
  }
  CHECK_THROWS_AS(fan({{"f1", "g"}}), StructuralError);
}

TEST_CASE("category validation") {
  CHECK_THROWS_AS(OrthCategory({"A", "B", "C"}, {{"f", "A", "B"}, {"g", "B", "C"}}, {}, {}), StructuralError);
  CHECK_NOTHROW(OrthCategory({"A", "B", "C"}, {{"f", "A", "B"}, {"g", "B", "C"}, {"gf", "A", "C"}},
                             {{{"g", "f", "gf"}}}, {}));
  CHECK_THROWS_AS(OrthCategory({"A", "B"}, {{"f", "A", "B"}, {"g", "A", "B"}}, {{{"g", "f", "g"}}}, {}),
                  StructuralError);
  CHECK_THROWS_AS(OrthCategory({"A"}, {{"f", "A", "X"}}, {}, {}), StructuralError);
  // e∘e = id is fine; e∘e = e is fine; but a table breaking associativity is rejected
  CHECK_NOTHROW(OrthCategory({"A"}, {{"e", "A", "A"}}, {{{"e", "e", "id_A"}}}, {}));
  CHECK_THROWS_AS(OrthCategory({"A"}, {{"e", "A", "A"}, {"z", "A", "A"}},
                               {{{"e", "e", "z"}}, {{"e", "z", "id_A"}}, {{"z", "e", "e"}}, {{"z", "z", "z"}}}, {}),
                  StructuralError);
}

TEST_CASE("causality") {
  OrthCategory c = toy_category();
  FieldTheory flat{c, OperadKind::uLie, {}, {}, std::nullopt};
  for (const auto &o : c.objects()) flat.algebras.emplace(o, abelian_ulie(ChainComplex::concentrated(0, 2)));
  flat.actions.emplace("iL", RationalMatrix::identity(3));
  flat.actions.emplace("iR", RationalMatrix::identity(3));
  CHECK(validate_theory(flat).ok());
  CHECK(check_causality(flat).ok());

  FieldTheory toy = toy_theory();
  REQUIRE(validate_theory(toy).ok());
  CausalityReport rep = check_causality(toy);
  CHECK(rep.ok());
  CHECK(rep.pairs == 2);
  CHECK(rep.checked == 18);

  FieldTheory mats{c, OperadKind::As, {}, {}, std::nullopt};
  for (const auto &o : c.objects()) mats.algebras.emplace(o, mat2());
  mats.actions.emplace("iL", RationalMatrix::identity(4));
  mats.actions.emplace("iR", RationalMatrix::identity(4));
  REQUIRE(validate_theory(mats).ok());
  CausalityReport bad = check_causality(mats);
  REQUIRE_FALSE(bad.ok());
  bool witnessed = false;
  for (const auto &v : bad.violations)
    if (v.f1 == "iL" && v.x == E12 && v.y == E21) {
      witnessed = true;
      CHECK(v.r1 == SparseVector{{E11, 1}, {E22, -1}});
      CHECK(v.r2.empty());
    }
  CHECK(witnessed);
  // the (mu, mu^op) bipointing reports the same pairs
  CHECK(check_causality(mats, as_with_opposite_pair()).violations.size() == bad.violations.size());
}

TEST_CASE("theory validation") {
  FieldTheory ft = toy_theory();
  ft.actions["iL"].set(0, 0, 2); // no longer preserves the bracket
  CHECK_FALSE(validate_theory(ft).ok());
  FieldTheory missing = toy_theory();
  missing.actions.erase("iR");
  CHECK_FALSE(validate_theory(missing).ok());

  OrthCategory c({"A", "B", "C"}, {{"f", "A", "B"}, {"g", "B", "C"}, {"gf", "A", "C"}}, {{{"g", "f", "gf"}}}, {});
  FieldTheory chain{c, OperadKind::uLie, {}, {}, std::nullopt};
  for (const auto &o : c.objects()) chain.algebras.emplace(o, heisenberg(symplectic_plane()));
  RationalMatrix s = RationalMatrix::from_dense({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
  chain.actions.emplace("f", s);
  chain.actions.emplace("g", s);
  chain.actions.emplace("gf", s * s);
  CHECK(validate_theory(chain).ok());
  chain.actions["gf"] = s;
  CHECK_FALSE(validate_theory(chain).ok());
}

TEST_CASE("quantization") {
  FieldTheory toy = toy_theory();
  FieldTheory q = quantize(toy, 3);
  CHECK(q.kind == OperadKind::As);
  CHECK(q.truncation == 3u);
  CHECK(q.algebra("M").dim() == 35);
  CHECK(q.algebra("L").dim() == 10);
  CHECK(validate_theory(q).ok());
  CausalityReport rep = check_causality(q);
  CHECK(rep.ok());
  CHECK(rep.skipped > 0);

  OrthCategory one({"P"}, {}, {}, {});
  FieldTheory plane{one, OperadKind::uLie, {{"P", heisenberg(symplectic_plane())}}, {}, std::nullopt};
  CHECK(quantize(plane, 2).algebra("P") == ccr(symplectic_plane(), 2).as_dg_algebra());

  FieldTheory ab = abelian_theory(ChainComplex::concentrated(0, 2), ChainComplex::concentrated(0, 2),
                                  RationalMatrix::identity(2));
  DgAlgebra qa = quantize(ab, 3).algebra("M");
  for (const auto &[in, v] : qa.op(kMu).table) {
    std::vector<std::size_t> swapped{in[1], in[0]};
    CHECK(qa.apply_basis(kMu, swapped) == v);
  }
}

TEST_CASE("dequantization") {
  OrthCategory c = toy_category(false);
  FieldTheory mats{c, OperadKind::As, {}, {}, std::nullopt};
  for (const auto &o : c.objects()) mats.algebras.emplace(o, mat2());
  mats.actions.emplace("iL", RationalMatrix::identity(4));
  mats.actions.emplace("iR", RationalMatrix::identity(4));
  FieldTheory gl = dequantize(mats);
  CHECK(gl.kind == OperadKind::uLie);
  CHECK(gl.algebra("M") == commutator_functor(mat2()));
  CHECK(validate_theory(gl).ok());
  CHECK(check_causality(gl).ok());

  // the unit of the adjunction on generators recovers the brackets
  FieldTheory toy = toy_theory();
  FieldTheory dq = dequantize(quantize(toy, 2));
  CHECK(validate_theory(dq).ok());
  CHECK(check_causality(dq).ok());
  for (const auto &o : toy.base.objects()) {
    TruncatedEnvelope env(toy.algebra(o), 2);
    const DgAlgebra &a = dq.algebra(o);
    for (std::size_t i = 0; i < toy.algebra(o).dim(); ++i)
      for (std::size_t j = 0; j < toy.algebra(o).dim(); ++j) {
        SparseVector x = env.stage_coordinates(env.embed(basis_vector(i)), 2);
        SparseVector y = env.stage_coordinates(env.embed(basis_vector(j)), 2);
        std::vector<SparseVector> in{x, y};
        std::vector<std::size_t> ij{i, j};
        SparseVector expected = env.stage_coordinates(env.embed(toy.algebra(o).apply_basis(kBracket, ij)), 2);
        CHECK(a.apply(kBracket, in) == expected);
      }
    CHECK(a.unit() == env.stage_coordinates(env.embed(toy.algebra(o).unit()), 2));
  }
}

TEST_CASE("W-constancy") {
  FieldTheory toy = toy_theory();
  CHECK(check_w_constancy(toy, {"id_L", "id_M"}, WMode::Strict).ok());
  CHECK(check_w_constancy(toy, {"id_L", "id_M"}, WMode::Homotopy).ok());
  CHECK_FALSE(check_w_constancy(toy, {"iL"}, WMode::Strict).ok());

  FieldTheory inv = invertible_theory();
  CHECK(check_w_constancy(inv, {"f"}, WMode::Strict).ok());
  for (std::size_t n = 0; n <= 4; ++n) {
    WReport rep = check_w_constancy(quantize(inv, n), {"f"}, WMode::Strict);
    CHECK(rep.ok());
    CHECK(rep.entries.size() == n + 1);
  }

  // Q in degree 0 collapsing onto the unit: homology dims 1 -> 0 in degree 0
  FieldTheory collapse = abelian_theory(ChainComplex::concentrated(0, 1), ChainComplex(),
                                        RationalMatrix(0, 1));
  REQUIRE(validate_theory(collapse).ok());
  WReport bad = check_w_constancy(collapse, {"f"}, WMode::Homotopy);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.entries[0].witness_degree == 0);

  // the acyclic piece Q -> Q collapsing onto the unit is a quasi-isomorphism, stagewise too
  ChainComplex acyclic({{0, 1}, {1, 1}}, {{1, RationalMatrix::from_dense({{1}})}});
  FieldTheory qi = abelian_theory(acyclic, ChainComplex(), RationalMatrix(0, 2));
  REQUIRE(validate_theory(qi).ok());
  CHECK(check_w_constancy(qi, {"f"}, WMode::Homotopy).ok());
  CHECK_FALSE(check_w_constancy(qi, {"f"}, WMode::Strict).ok());
  WReport staged = check_w_constancy(quantize(qi, 4), {"f"}, WMode::Homotopy);
  CHECK(staged.ok());
  CHECK(staged.entries.size() == 5);
}

TEST_CASE("pullback along orthogonal functors") {
  FieldTheory toy = toy_theory();
  OrthFunctor id{{{"L", "L"}, {"R", "R"}, {"M", "M"}}, {{"iL", "iL"}, {"iR", "iR"}}};
  FieldTheory same = pullback_theory(toy.base, id, toy);
  CHECK(same.algebras == toy.algebras);
  CHECK(same.action("iL") == toy.action("iL"));
  CHECK(check_causality(same).ok());

  OrthCategory sub({"L", "M"}, {{"iL", "L", "M"}}, {}, {});
  FieldTheory restricted = pullback_theory(sub, {{{"L", "L"}, {"M", "M"}}, {{"iL", "iL"}}}, toy);
  CHECK(restricted.algebras.size() == 2);
  CHECK(validate_theory(restricted).ok());

  OrthCategory two({"X", "Y"}, {}, {}, {});
  FieldTheory constant = pullback_theory(two, {{{"X", "M"}, {"Y", "M"}}, {}}, toy);
  CHECK(constant.algebra("X") == toy.algebra("M"));
  CHECK(validate_theory(constant).ok());

  FieldTheory unordered = toy;
  unordered.base = toy_category(false);
  CHECK_THROWS_AS(pullback_theory(toy.base, id, unordered), StructuralError);
  OrthFunctor wrong_ends{{{"L", "R"}, {"R", "L"}, {"M", "M"}}, {{"iL", "iL"}, {"iR", "iR"}}};
  CHECK_THROWS_AS(pullback_theory(toy.base, wrong_ends, toy), StructuralError);
}
