#include "fixtures.hpp"
#include "opq/envelope.hpp"
#include "opq/errors.hpp"

#include <doctest.h>

using namespace opq;
using namespace opq::testing;

namespace {

std::map<int, std::size_t> basis_degrees(const TruncatedEnvelope &env, std::size_t n) {
  std::map<int, std::size_t> out;
  for (const auto &m : env.stage_basis(n)) out[env.degree(m)]++;
  return out;
}

std::size_t total(const std::map<int, std::size_t> &dims) {
  std::size_t t = 0;
  for (auto [d, k] : dims) t += k;
  return t;
}

PBWElement gen(std::size_t g) { return {{Monomial{g}, Rational(1)}}; }

std::vector<DgAlgebra> sample_ulie(std::mt19937_64 &rng) {
  std::vector<DgAlgebra> out{heisenberg(symplectic_plane()), commutator_functor(mat2()),
                             commutator_functor(exterior2()), commutator_functor(dg_pair()),
                             abelian_ulie(ChainComplex({{-1, 1}, {0, 1}, {1, 1}}, {}))};
  for (int i = 0; i < 3; ++i) out.push_back(heisenberg(random_presymplectic4(rng)));
  for (int i = 0; i < 2; ++i) out.push_back(commutator_functor(random_as_algebra(rng)));
  return out;
}

} // namespace

TEST_CASE("envelope examples") {
  TruncatedEnvelope line(abelian_ulie(ChainComplex::concentrated(0, 1)), 3);
  CHECK(line.stage_basis(3).size() == 4);
  TruncatedEnvelope weyl = ccr(symplectic_plane(), 2);
  CHECK(weyl.stage_basis(2).size() == 6);
  TruncatedEnvelope odd(abelian_ulie(ChainComplex::concentrated(-1, 1)), 5);
  CHECK(odd.stage_basis(5).size() == 2);
  CHECK_THROWS_AS(TruncatedEnvelope(mat2(), 2), StructuralError);
  MultilinearMap br{2, {}};
  CHECK_THROWS_AS(
      TruncatedEnvelope(DgAlgebra(ChainComplex::concentrated(0, 1), OperadKind::Lie, {{kBracket, br}}), 2),
      StructuralError);
  std::vector<std::size_t> reversed{1, 0};
  CHECK_NOTHROW(TruncatedEnvelope(heisenberg(symplectic_plane()), 2, reversed));
  std::vector<std::size_t> skips_generator{0, 2};
  CHECK_THROWS_AS(TruncatedEnvelope(heisenberg(symplectic_plane()), 2, skips_generator), StructuralError);
}

TEST_CASE("normal form examples") {
  TruncatedEnvelope weyl = ccr(symplectic_plane(), 3);
  std::vector<std::size_t> ordered{0, 0, 1};
  CHECK(weyl.normal_form(ordered) == PBWElement{{Monomial{0, 0, 1}, 1}});
  std::vector<std::size_t> swapped{1, 0};
  CHECK(weyl.normal_form(swapped) == PBWElement{{Monomial{0, 1}, 1}, {Monomial{}, -1}});
  CHECK(weyl.element_str(weyl.normal_form(swapped)) == "-1 + e1*e2");
  TruncatedEnvelope odd(abelian_ulie(ChainComplex::concentrated(-1, 1)), 3);
  std::vector<std::size_t> cc{0, 0};
  CHECK(odd.normal_form(cc).empty());
  std::vector<std::size_t> too_long{0, 1, 0, 1};
  CHECK_THROWS_AS((void)weyl.normal_form(too_long), TruncationOverflow);
}

TEST_CASE("multiply examples") {
  TruncatedEnvelope weyl = ccr(symplectic_plane(), 2);
  CHECK(weyl.multiply(weyl.one(), gen(0)) == gen(0));
  PBWElement comm = weyl.multiply(gen(0), gen(1));
  add_scaled(comm, weyl.multiply(gen(1), gen(0)), Rational(-1));
  CHECK(comm == weyl.one());
  CHECK_THROWS_AS((void)weyl.multiply(weyl.multiply(gen(0), gen(1)), gen(0)), TruncationOverflow);

  TruncatedEnvelope line(abelian_ulie(ChainComplex::concentrated(0, 1)), 3);
  PBWElement xp1 = gen(0), xm1 = gen(0);
  add_term(xp1, {}, 1);
  add_term(xm1, {}, -1);
  CHECK(line.multiply(xp1, xm1) == PBWElement{{Monomial{0, 0}, 1}, {Monomial{}, -1}});
}

TEST_CASE("basis counts agree with the filtration oracle") {
  std::mt19937_64 rng(31);
  for (const auto &v : sample_ulie(rng)) {
    TruncatedEnvelope env(v, 6);
    for (std::size_t n = 0; n <= 6; ++n) CHECK(basis_degrees(env, n) == filtration_dim(v, n));
  }
  DgAlgebra plane = heisenberg(symplectic_plane());
  CHECK(total(filtration_dim(plane, 6)) == 28);
  DgAlgebra odd = abelian_ulie(ChainComplex::concentrated(1, 1));
  for (std::size_t n = 1; n <= 8; ++n) CHECK(total(filtration_dim(odd, n)) == 2);
  CHECK(total(filtration_dim(heisenberg(PresymplecticComplex{}), 5)) == 1);
}

TEST_CASE("rewriting is confluent") {
  std::mt19937_64 rng(32);
  for (const auto &v : sample_ulie(rng)) {
    TruncatedEnvelope env(v, 5);
    std::uniform_int_distribution<std::size_t> len(0, 5), pick(0, env.generator_count() - 1);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<std::size_t> word(len(rng));
      for (auto &g : word) g = pick(rng);
      PBWElement fast = env.normal_form(word);
      CHECK(rewrite_normal_form(env, word, RewriteOrder::Leftmost) == fast);
      CHECK(rewrite_normal_form(env, word, RewriteOrder::Rightmost) == fast);
      CHECK(rewrite_normal_form(env, word, RewriteOrder::Random, &rng) == fast);
      for (const auto &[m, c] : fast) CHECK(env.is_normal(m));
    }
  }
}

TEST_CASE("a Jacobi violation breaks confluence") {
  DgAlgebra v = broken_jacobi_ulie();
  REQUIRE_FALSE(validate_algebra(v).ok());
  TruncatedEnvelope env(v, 3);
  bool differs = false;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c) {
        std::vector<std::size_t> w{a, b, c};
        if (rewrite_normal_form(env, w, RewriteOrder::Leftmost) != rewrite_normal_form(env, w, RewriteOrder::Rightmost))
          differs = true;
      }
  CHECK(differs);
}

TEST_CASE("CCR identity") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    PresymplecticComplex v = random_presymplectic4(rng);
    TruncatedEnvelope env = ccr(v, 2);
    REQUIRE(env.generator_count() == 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        int eps = koszul_sign(static_cast<long>(env.generator_degree(i)) * env.generator_degree(j));
        PBWElement lhs = env.multiply(gen(i), gen(j));
        add_scaled(lhs, env.multiply(gen(j), gen(i)), Rational(-eps));
        // generator g sits at source index generators()[g]; the carrier index shifts past the unit
        std::size_t si = env.generators()[i], sj = env.generators()[j];
        std::size_t ci = si > heisenberg_unit_index(v.carrier) ? si - 1 : si;
        std::size_t cj = sj > heisenberg_unit_index(v.carrier) ? sj - 1 : sj;
        PBWElement rhs;
        add_term(rhs, {}, v.pair(ci, cj));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("differential squares to zero and is a derivation") {
  std::mt19937_64 rng(34);
  for (const auto &v : sample_ulie(rng)) {
    TruncatedEnvelope env(v, 3);
    ChainComplex stage = env.stage_complex(3);
    CHECK(validate_complex(stage).ok());
    const auto basis = env.stage_basis(3);
    for (const auto &a : basis)
      for (const auto &b : basis) {
        if (a.size() + b.size() > 3) continue;
        PBWElement pa{{a, 1}}, pb{{b, 1}};
        PBWElement lhs = env.differential(env.multiply(pa, pb));
        PBWElement rhs = env.multiply(env.differential(pa), pb);
        add_scaled(rhs, env.multiply(pa, env.differential(pb)), Rational(koszul_sign(env.degree(a))));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("the source unit becomes the empty monomial") {
  std::mt19937_64 rng(35);
  for (const auto &v : sample_ulie(rng)) {
    TruncatedEnvelope env(v, 2);
    CHECK(env.embed(v.unit()) == env.one());
  }
  // unit E11 + E22 is not a basis vector
  TruncatedEnvelope gl2(commutator_functor(mat2()), 2);
  CHECK(gl2.unit_direction() == E22);
  CHECK(gl2.embed(basis_vector(E22)) == PBWElement{{Monomial{}, 1}, {Monomial{0}, -1}});
}

TEST_CASE("envelope as an As algebra") {
  std::mt19937_64 rng(36);
  TruncatedEnvelope env = ccr(random_presymplectic4(rng), 2);
  DgAlgebra a = env.as_dg_algebra();
  AlgebraReport rep = validate_algebra(a);
  CHECK(rep.ok());
  CHECK(rep.relations.skipped > 0);
}

TEST_CASE("envelope maps") {
  DgAlgebra plane = heisenberg(symplectic_plane());
  TruncatedEnvelope e(plane, 3);
  for (std::size_t n = 0; n <= 3; ++n)
    CHECK(envelope_map(RationalMatrix::identity(3), e, e, n).flat().is_identity());

  // (Q --id--> Q in degrees 1, 0) plus the unit, onto the unit
  DgAlgebra v = abelian_ulie(ChainComplex({{0, 1}, {1, 1}}, {{1, RationalMatrix::from_dense({{1}})}}));
  DgAlgebra w = heisenberg(PresymplecticComplex{});
  REQUIRE(v.unit() == basis_vector(1));
  RationalMatrix rho = RationalMatrix::from_dense({{0, 1, 0}});
  TruncatedEnvelope ev(v, 4), ew(w, 4);
  for (std::size_t n = 0; n <= 4; ++n) {
    ChainMap f = envelope_map(rho, ev, ew, n);
    CHECK(f.non_commuting_degrees().empty());
    CHECK(is_quasi_iso(f));
  }

  // Q into Q^2 is not a quasi-isomorphism
  DgAlgebra one = abelian_ulie(ChainComplex::concentrated(0, 1));
  DgAlgebra two = abelian_ulie(ChainComplex::concentrated(0, 2));
  RationalMatrix inc = RationalMatrix::from_dense({{1, 0}, {0, 0}, {0, 1}});
  TruncatedEnvelope e1(one, 2), e2(two, 2);
  QuasiIsoReport rep = quasi_iso_report(envelope_map(inc, e1, e2, 2));
  CHECK_FALSE(rep.quasi_iso);
  CHECK(rep.witness_degree == 0);
  CHECK(rep.source_homology == 3);
  CHECK(rep.target_homology == 6);

  RationalMatrix not_lie = RationalMatrix::from_dense({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK_THROWS_AS(envelope_map(not_lie, e, e, 2), StructuralError);
}

TEST_CASE("envelope maps are multiplicative") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    PresymplecticComplex v = symplectic_plane();
    // symplectic automorphism of the plane: (a b; c d) with ad - bc = 1
    Rational a = small_rational(rng), b = small_rational(rng), c = small_rational(rng);
    if (a.is_zero()) continue;
    RationalMatrix rho = RationalMatrix::from_dense({{a, b, 0}, {c, (Rational(1) + b * c) / a, 0}, {0, 0, 1}});
    TruncatedEnvelope env = ccr(v, 3);
    const auto basis = env.stage_basis(3);
    for (const auto &x : basis)
      for (const auto &y : basis) {
        if (x.size() + y.size() > 3) continue;
        PBWElement px{{x, 1}}, py{{y, 1}};
        CHECK(envelope_image(rho, env, env, env.multiply(px, py)) ==
              env.multiply(envelope_image(rho, env, env, px), envelope_image(rho, env, env, py)));
      }
  }
}

TEST_CASE("adjunction roundtrip") {
  DgAlgebra v = abelian_ulie(ChainComplex::concentrated(0, 1)); // x, 1
  DgAlgebra dual = truncated_polynomial(2);                      // 1, ε
  TruncatedEnvelope env(v, 3);
  RationalMatrix rho = RationalMatrix::from_dense({{0, 1}, {1, 0}});
  RationalMatrix kappa = adjunction_backward(env, dual, rho);
  // κ(1) = 1, κ(x) = ε, κ(x^2) = κ(x^3) = 0
  CHECK(kappa == RationalMatrix::from_dense({{1, 0, 0, 0}, {0, 1, 0, 0}}));
  CHECK(adjunction_forward(env, dual, kappa) == rho);
  CHECK(adjunction_backward(env, dual, adjunction_forward(env, dual, kappa)) == kappa);

  RationalMatrix zero_rho = RationalMatrix::from_dense({{0, 1}, {0, 0}});
  RationalMatrix aug = adjunction_backward(env, dual, zero_rho);
  CHECK(aug == RationalMatrix::from_dense({{1, 0, 0, 0}, {0, 0, 0, 0}}));
  CHECK(adjunction_forward(env, dual, aug) == zero_rho);

  // e1 -> E12, e2 -> E21 does not respect the bracket
  TruncatedEnvelope weyl = ccr(symplectic_plane(), 2);
  RationalMatrix bad(4, 3);
  bad.set(E12, 0, 1);
  bad.set(E21, 1, 1);
  bad.set(E11, 2, 1);
  bad.set(E22, 2, 1);
  CHECK_THROWS_AS(adjunction_backward(weyl, mat2(), bad), StructuralError);

  // x -> x in Q[x]/x^4 needs words of length 3
  TruncatedEnvelope short_env(v, 2);
  RationalMatrix to_x(4, 2);
  to_x.set(1, 0, 1);
  to_x.set(0, 1, 1);
  CHECK_THROWS_AS(adjunction_backward(short_env, truncated_polynomial(4), to_x), TruncationOverflow);
  CHECK_NOTHROW(adjunction_backward(env, truncated_polynomial(4), to_x));
}
