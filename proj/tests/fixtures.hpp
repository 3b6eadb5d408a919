#pragma once

// Small algebras used across the test suites, built from explicit tables.

#include "opq/algebras.hpp"
#include "opq/dg_algebra.hpp"
#include "opq/operad.hpp"
#include "support.hpp"

#include <array>
#include <functional>
#include <random>

namespace opq::testing {

struct Product {
  std::size_t i, j, k;
  Rational c;
};

inline DgAlgebra make_as(const ChainComplex &carrier, const std::vector<Product> &mu, const SparseVector &unit) {
  MultilinearMap m{2, {}}, eta{0, {}};
  for (const auto &p : mu) m.add({p.i, p.j}, p.k, p.c);
  for (const auto &[k, c] : unit) eta.add({}, k, c);
  return DgAlgebra(carrier, OperadKind::As, {{kMu, m}, {kEta, eta}});
}

/// 2x2 matrices, basis E11, E12, E21, E22 (index 2r + c).
inline DgAlgebra mat2() {
  std::vector<Product> mu;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c) mu.push_back({2 * a + b, 2 * b + c, 2 * a + c, 1});
  return make_as(ChainComplex::concentrated(0, 4), mu, {{0, 1}, {3, 1}});
}

inline constexpr std::size_t E11 = 0, E12 = 1, E21 = 2, E22 = 3;

/// Mat2 with the product E12*E21 replaced by 2*E11, which breaks associativity.
inline DgAlgebra broken_mat2() {
  std::vector<Product> mu;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c) {
        Rational coeff = (a == 0 && b == 1 && c == 0) ? Rational(2) : Rational(1);
        mu.push_back({2 * a + b, 2 * b + c, 2 * a + c, coeff});
      }
  return make_as(ChainComplex::concentrated(0, 4), mu, {{0, 1}, {3, 1}});
}

/// Q[x]/x^n with basis 1, x, ..., x^{n-1} in degree 0.
inline DgAlgebra truncated_polynomial(std::size_t n) {
  std::vector<Product> mu;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) mu.push_back({i, j, i + j, 1});
  return make_as(ChainComplex::concentrated(0, n), mu, {{0, 1}});
}

inline DgAlgebra upper_triangular() { // E11, E12, E22
  return make_as(ChainComplex::concentrated(0, 3), {{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 2, 1, 1}, {2, 2, 2, 1}},
                 {{0, 1}, {2, 1}});
}

inline DgAlgebra product_qq() {
  return make_as(ChainComplex::concentrated(0, 2), {{0, 0, 0, 1}, {1, 1, 1, 1}}, {{0, 1}, {1, 1}});
}

/// Exterior algebra on two odd generators: 1 (deg 0), e1, e2 (deg 1), e1e2 (deg 2).
inline DgAlgebra exterior2() {
  ChainComplex c({{0, 1}, {1, 2}, {2, 1}}, {});
  std::vector<Product> mu{{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 1}, {0, 2, 2, 1}, {2, 0, 2, 1},
                          {0, 3, 3, 1}, {3, 0, 3, 1}, {1, 2, 3, 1}, {2, 1, 3, -1}};
  return make_as(c, mu, {{0, 1}});
}

/// 1, f in degree 0 and e in degree 1 with de = f and all other products zero.
inline DgAlgebra dg_pair() {
  ChainComplex c({{0, 2}, {1, 1}}, {{1, RationalMatrix::from_dense({{0}, {1}})}});
  std::vector<Product> mu{{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 1}, {0, 2, 2, 1}, {2, 0, 2, 1}};
  return make_as(c, mu, {{0, 1}});
}

/// Structure transported along a degree-preserving invertible flat matrix p.
inline DgAlgebra transport(const DgAlgebra &a, const RationalMatrix &p) {
  RationalMatrix pinv = *inverse(p);
  RationalMatrix cols = pinv.transpose(); // row i = P^{-1} e_i
  std::map<std::string, MultilinearMap> ops;
  for (const auto &[name, m] : a.ops()) {
    MultilinearMap out{m.arity, {}};
    std::vector<std::size_t> idx(m.arity);
    auto rec = [&](auto &self, std::size_t pos) -> void {
      if (pos == m.arity) {
        std::vector<SparseVector> args;
        for (auto i : idx) args.push_back(cols.row(i));
        for (const auto &[k, c] : p.apply(a.apply(name, args))) out.add(idx, k, c);
        return;
      }
      for (std::size_t i = 0; i < a.dim(); ++i) {
        idx[pos] = i;
        self(self, pos + 1);
      }
    };
    rec(rec, 0);
    ops.emplace(name, out);
  }
  RationalMatrix d = p * a.differential() * pinv;
  std::map<int, RationalMatrix> diffs;
  for (int n : a.carrier().support()) {
    RationalMatrix block = d.block(a.carrier().flat_offset(n - 1), a.carrier().dim(n - 1),
                                   a.carrier().flat_offset(n), a.carrier().dim(n));
    if (!block.is_zero()) diffs[n] = block;
  }
  return DgAlgebra(ChainComplex(a.carrier().dims(), diffs), a.kind(), std::move(ops), a.filtration());
}

/// Random degree-preserving change of basis.
inline RationalMatrix random_graded_basis(std::mt19937_64 &rng, const ChainComplex &c) {
  RationalMatrix p(c.total_dim(), c.total_dim());
  for (int n : c.support()) {
    RationalMatrix b = random_invertible(rng, c.dim(n));
    for (const auto &t : b.triplets()) p.set(c.flat_offset(n) + t.row, c.flat_offset(n) + t.col, t.value);
  }
  return p;
}

/// Random associative dg algebra of dimension at most 4.
inline DgAlgebra random_as_algebra(std::mt19937_64 &rng) {
  static const std::array<std::function<DgAlgebra()>, 8> family{
      mat2, upper_triangular, [] { return truncated_polynomial(2); }, product_qq,
      [] { return truncated_polynomial(3); }, [] { return truncated_polynomial(4); }, exterior2, dg_pair};
  std::uniform_int_distribution<std::size_t> pick(0, family.size() - 1);
  DgAlgebra a = family[pick(rng)]();
  return transport(a, random_graded_basis(rng, a.carrier()));
}

/// Random homogeneous element of the given degree (zero if the degree is empty).
inline SparseVector random_element(std::mt19937_64 &rng, const DgAlgebra &a, int degree) {
  SparseVector v;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a.degree(i) == degree) add_entry(v, i, small_rational(rng, 3));
  return v;
}

/// Standard symplectic plane: e1, e2 in degree 0 with ω(e1, e2) = 1.
inline PresymplecticComplex symplectic_plane() {
  PresymplecticComplex v{ChainComplex::concentrated(0, 2), {}};
  v.set(0, 1, 1);
  v.set(1, 0, -1);
  return v;
}

/// Lie-Poisson algebra of the Heisenberg Lie algebra {x, y} = z, truncated to
/// polynomials of degree at most 2 (dimension 10).
inline DgAlgebra lie_poisson_truncated() {
  std::vector<std::array<int, 3>> mono;
  for (int total = 0; total <= 2; ++total)
    for (int a = total; a >= 0; --a)
      for (int b = total - a; b >= 0; --b) mono.push_back({a, b, total - a - b});
  auto index = [&](std::array<int, 3> e) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < mono.size(); ++i)
      if (mono[i] == e) return i;
    return std::nullopt;
  };
  MultilinearMap mu{2, {}}, br{2, {}}, eta{0, {}};
  eta.add({}, *index({0, 0, 0}), 1);
  for (std::size_t i = 0; i < mono.size(); ++i)
    for (std::size_t j = 0; j < mono.size(); ++j) {
      auto p = mono[i], q = mono[j];
      if (auto k = index({p[0] + q[0], p[1] + q[1], p[2] + q[2]})) mu.add({i, j}, *k, 1);
      // {p, q} = (∂x p ∂y q - ∂y p ∂x q) z
      auto term = [&](int dp, int dq, int sign) {
        if (p[dp] == 0 || q[dq] == 0) return;
        std::array<int, 3> e{p[0] + q[0], p[1] + q[1], p[2] + q[2] + 1};
        e[dp] -= 1;
        e[dq] -= 1;
        if (auto k = index(e)) br.add({i, j}, *k, Rational(sign * p[dp] * q[dq]));
      };
      term(0, 1, 1);
      term(1, 0, -1);
    }
  return DgAlgebra(ChainComplex::concentrated(0, mono.size()), OperadKind::Pois,
                   {{kMu, mu}, {kPoisson, br}, {kEta, eta}});
}

} // namespace opq::testing

namespace opq::testing {

/// Graded presymplectic complex a (deg 1), b1, b2 (deg 0), c (deg -1) with
/// da = l1 b1 + l2 b2, db_i = m_i c, ω(b1, b2) = s, ω(a, c) = ω(c, a) = t.
/// Flat order: c, b1, b2, a.
inline PresymplecticComplex presymplectic4(const Rational &l1, const Rational &l2, const Rational &s,
                                           const Rational &t) {
  Rational m1 = -l2 * s / t, m2 = l1 * s / t;
  ChainComplex c({{-1, 1}, {0, 2}, {1, 1}},
                 {{1, RationalMatrix::from_dense({{l1}, {l2}})}, {0, RationalMatrix::from_dense({{m1, m2}})}});
  PresymplecticComplex v{c, {}};
  v.set(1, 2, s);
  v.set(2, 1, -s);
  v.set(3, 0, t);
  v.set(0, 3, t);
  return v;
}

inline PresymplecticComplex random_presymplectic4(std::mt19937_64 &rng) {
  Rational t;
  while (t.is_zero()) t = small_rational(rng);
  return presymplectic4(small_rational(rng), small_rational(rng), small_rational(rng), t);
}

} // namespace opq::testing

namespace opq::testing {

/// Abelian unital Lie algebra on a complex, unit appended in degree 0.
inline DgAlgebra abelian_ulie(const ChainComplex &c) { return heisenberg(PresymplecticComplex{c, {}}); }

/// Unital Lie algebra whose antisymmetric bracket violates Jacobi: x, y, z and a unit.
inline DgAlgebra broken_jacobi_ulie() {
  MultilinearMap br{2, {}}, eta{0, {}};
  auto set = [&](std::size_t i, std::size_t j, std::size_t k, const Rational &c) {
    br.add({i, j}, k, c);
    br.add({j, i}, k, -c);
  };
  set(0, 1, 2, 1);
  set(1, 2, 0, 1);
  set(2, 0, 1, 1);
  set(0, 2, 0, 1);
  eta.add({}, 3, 1);
  return DgAlgebra(ChainComplex::concentrated(0, 4), OperadKind::uLie, {{kBracket, br}, {kEta, eta}});
}

} // namespace opq::testing

#include "opq/fieldtheory.hpp"

namespace opq::testing {

/// L and R include into M; the two inclusions are orthogonal.
inline OrthCategory toy_category(bool with_orth = true) {
  std::vector<MorphismPair> seeds;
  if (with_orth) seeds.push_back({"iL", "iR"});
  return OrthCategory({"L", "R", "M"}, {{"iL", "L", "M"}, {"iR", "R", "M"}}, {}, seeds);
}

/// H(plane) on L and R, H(plane ⊕ plane) on M, inclusions into the two summands.
inline FieldTheory toy_theory() {
  PresymplecticComplex two{ChainComplex::concentrated(0, 4), {}};
  two.set(0, 1, 1);
  two.set(1, 0, -1);
  two.set(2, 3, 1);
  two.set(3, 2, -1);
  FieldTheory ft{toy_category(), OperadKind::uLie, {}, {}, std::nullopt};
  ft.algebras.emplace("L", heisenberg(symplectic_plane()));
  ft.algebras.emplace("R", heisenberg(symplectic_plane()));
  ft.algebras.emplace("M", heisenberg(two));
  // flat bases: (e1, e2, 1) and (e1, e2, e3, e4, 1)
  RationalMatrix il(5, 3), ir(5, 3);
  il.set(0, 0, 1);
  il.set(1, 1, 1);
  il.set(4, 2, 1);
  ir.set(2, 0, 1);
  ir.set(3, 1, 1);
  ir.set(4, 2, 1);
  ft.actions.emplace("iL", il);
  ft.actions.emplace("iR", ir);
  return ft;
}

/// One morphism f : U -> M acting on H(plane) by a symplectic shear.
inline FieldTheory invertible_theory() {
  OrthCategory c({"U", "M"}, {{"f", "U", "M"}}, {}, {});
  FieldTheory ft{c, OperadKind::uLie, {}, {}, std::nullopt};
  ft.algebras.emplace("U", heisenberg(symplectic_plane()));
  ft.algebras.emplace("M", heisenberg(symplectic_plane()));
  ft.actions.emplace("f", RationalMatrix::from_dense({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}));
  return ft;
}

} // namespace opq::testing
