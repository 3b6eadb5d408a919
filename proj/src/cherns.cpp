#include "opq/cherns.hpp"

#include "opq/envelope.hpp"
#include "opq/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace opq {

namespace {

using Tri = std::array<std::size_t, 3>;

Tri sorted(Tri t) {
  std::sort(t.begin(), t.end());
  return t;
}

Edge unordered(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::string tri_str(const Tri &t) {
  return "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + ")";
}

std::string edge_str(const Edge &e) { return "(" + std::to_string(e[0]) + "," + std::to_string(e[1]) + ")"; }

// +1 if (a,b,c) is an even permutation of (x,y,z), -1 if odd; both contain the same vertices
int permutation_sign(const Tri &from, const Tri &to) {
  for (int r = 0; r < 3; ++r)
    if (from[0] == to[r] && from[1] == to[(r + 1) % 3] && from[2] == to[(r + 2) % 3]) return 1;
  return -1;
}

} // namespace

SurfaceReport validate_surface(const TriangulatedSurface &s) {
  SurfaceReport report;
  auto &p = report.problems;
  const std::size_t n = s.vertices;
  std::vector<std::size_t> order = s.vertex_order;
  std::sort(order.begin(), order.end());
  std::vector<std::size_t> expected(n);
  std::iota(expected.begin(), expected.end(), 0);
  if (order != expected) p.push_back("vertex_order is not a permutation of the vertices");
  std::set<Tri> seen;
  std::map<Edge, std::vector<std::pair<std::size_t, std::size_t>>> directed; // edge -> (from, to) per triangle
  std::vector<bool> used(n, false);
  for (const auto &t : s.triangles) {
    if (t[0] >= n || t[1] >= n || t[2] >= n) {
      p.push_back("triangle " + tri_str(t) + " uses an unknown vertex");
      continue;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      p.push_back("triangle " + tri_str(t) + " is degenerate");
      continue;
    }
    if (!seen.insert(sorted(t)).second) p.push_back("triangle " + tri_str(t) + " appears twice");
    for (int k = 0; k < 3; ++k) {
      std::size_t a = t[k], b = t[(k + 1) % 3];
      directed[unordered(a, b)].emplace_back(a, b);
      used[a] = true;
    }
  }
  if (!p.empty()) return report;
  for (std::size_t v = 0; v < n; ++v)
    if (!used[v]) p.push_back("vertex " + std::to_string(v) + " lies in no triangle");
  std::set<Edge> boundary;
  for (const auto &[e, dirs] : directed) {
    if (dirs.size() > 2) p.push_back("edge " + edge_str(e) + " bounds more than two triangles");
    if (dirs.size() == 2 && dirs[0] == dirs[1])
      p.push_back("triangles at edge " + edge_str(e) + " are not coherently oriented");
    if (dirs.size() == 1) boundary.insert(e);
  }
  std::set<Edge> marked;
  for (const auto &e : s.boundary_edges) marked.insert(unordered(e[0], e[1]));
  if (marked != boundary) p.push_back("boundary_edges differ from the edges with one incident triangle");
  // link of every vertex: a single path or cycle
  for (std::size_t v = 0; v < n && p.empty(); ++v) {
    std::map<std::size_t, std::vector<std::size_t>> link;
    for (const auto &t : s.triangles) {
      auto it = std::find(t.begin(), t.end(), v);
      if (it == t.end()) continue;
      std::vector<std::size_t> others;
      for (auto u : t)
        if (u != v) others.push_back(u);
      link[others[0]].push_back(others[1]);
      link[others[1]].push_back(others[0]);
    }
    bool degree_ok = std::all_of(link.begin(), link.end(), [](const auto &kv) { return kv.second.size() <= 2; });
    std::set<std::size_t> reached;
    std::vector<std::size_t> stack{link.begin()->first};
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      if (!reached.insert(u).second) continue;
      for (auto w : link[u]) stack.push_back(w);
    }
    if (!degree_ok || reached.size() != link.size())
      p.push_back("link of vertex " + std::to_string(v) + " is not a path or a cycle");
  }
  return report;
}

SurfaceCochains surface_cochains(const TriangulatedSurface &s) {
  SurfaceReport rep = validate_surface(s);
  if (!rep.ok()) throw StructuralError("invalid surface: " + rep.problems.front());
  SurfaceCochains c;
  c.position.assign(s.vertices, 0);
  for (std::size_t k = 0; k < s.vertex_order.size(); ++k) c.position[s.vertex_order[k]] = k;
  auto by_position = [&](std::size_t a, std::size_t b) { return c.position[a] < c.position[b]; };
  std::set<Edge> boundary;
  std::set<std::size_t> boundary_vertices;
  for (const auto &e : s.boundary_edges) {
    boundary.insert(c.ordered(e[0], e[1]));
    boundary_vertices.insert(e[0]);
    boundary_vertices.insert(e[1]);
  }
  std::set<Edge> edges;
  for (const auto &t : s.triangles) {
    Tri o = t;
    std::sort(o.begin(), o.end(), by_position);
    c.triangle_index.emplace(sorted(t), c.triangles.size());
    c.triangles.push_back(o);
    c.orientation.push_back(permutation_sign(t, o));
    for (int k = 0; k < 3; ++k) edges.insert(c.ordered(t[k], t[(k + 1) % 3]));
  }
  for (const auto &e : edges)
    if (!boundary.count(e)) c.interior_edges.push_back(e);
  std::sort(c.interior_edges.begin(), c.interior_edges.end(), [&](const Edge &a, const Edge &b) {
    return std::make_pair(c.position[a[0]], c.position[a[1]]) < std::make_pair(c.position[b[0]], c.position[b[1]]);
  });
  for (std::size_t i = 0; i < c.interior_edges.size(); ++i) c.edge_index.emplace(c.interior_edges[i], i);
  for (auto v : s.vertex_order)
    if (!boundary_vertices.count(v)) {
      c.vertex_index.emplace(v, c.interior_vertices.size());
      c.interior_vertices.push_back(v);
    }
  return c;
}

ChainComplex cs_complex(const TriangulatedSurface &s) {
  SurfaceCochains c = surface_cochains(s);
  const std::size_t T = c.triangles.size(), E = c.interior_edges.size(), V = c.interior_vertices.size();
  RationalMatrix d1(E, V), d0(T, E);
  // (-δf)(ab) = f(a) - f(b)
  for (std::size_t e = 0; e < E; ++e) {
    const auto &[a, b] = c.interior_edges[e];
    if (auto it = c.vertex_index.find(a); it != c.vertex_index.end()) d1.add(e, it->second, 1);
    if (auto it = c.vertex_index.find(b); it != c.vertex_index.end()) d1.add(e, it->second, -1);
  }
  // (-δα)(v0v1v2) = -α(v1v2) + α(v0v2) - α(v0v1)
  for (std::size_t t = 0; t < T; ++t) {
    const auto &[v0, v1, v2] = c.triangles[t];
    const std::array<std::pair<Edge, int>, 3> faces{{{{v1, v2}, -1}, {{v0, v2}, 1}, {{v0, v1}, -1}}};
    for (const auto &[e, sign] : faces)
      if (auto it = c.edge_index.find(e); it != c.edge_index.end()) d0.add(t, it->second, sign);
  }
  std::map<int, std::size_t> dims{{-1, T}, {0, E}, {1, V}};
  std::map<int, RationalMatrix> d;
  if (!d1.is_zero()) d[1] = d1;
  if (!d0.is_zero()) d[0] = d0;
  return ChainComplex(dims, d);
}

PresymplecticComplex cs_presymplectic(const TriangulatedSurface &s) {
  SurfaceCochains c = surface_cochains(s);
  PresymplecticComplex out{cs_complex(s), {}};
  // I(x, y) = ½[<x∪y> + (-1)^{pq} <y∪x>] in form degrees, and ω(x, y) = s(y) I(x, y)
  // with s = -1 when y is a 2- or 0-cochain
  std::map<std::pair<std::size_t, std::size_t>, Rational> I;
  const Rational half(1, 2);
  for (std::size_t t = 0; t < c.triangles.size(); ++t) {
    const auto &[v0, v1, v2] = c.triangles[t];
    const Rational eps(c.orientation[t]);
    std::size_t chi = c.flat_triangle(t);
    for (std::size_t v : {v0, v2})
      if (auto it = c.vertex_index.find(v); it != c.vertex_index.end()) {
        std::size_t f = c.flat_vertex(it->second);
        I[{chi, f}] += half * eps;
        I[{f, chi}] += half * eps;
      }
    auto e01 = c.edge_index.find({v0, v1}), e12 = c.edge_index.find({v1, v2});
    if (e01 != c.edge_index.end() && e12 != c.edge_index.end()) {
      std::size_t a = c.flat_edge(e01->second), b = c.flat_edge(e12->second);
      I[{a, b}] += half * eps;
      I[{b, a}] -= half * eps;
    }
  }
  const std::size_t edges_end = c.triangles.size() + c.interior_edges.size();
  for (const auto &[xy, v] : I) {
    bool one_form = xy.second >= c.triangles.size() && xy.second < edges_end;
    out.set(xy.first, xy.second, one_form ? v : -v);
  }
  return out;
}

// ---------------------------------------------------------------- morphisms

void check_surface_morphism(const TriangulatedSurface &src, const TriangulatedSurface &tgt,
                            const std::vector<std::size_t> &vertex_map) {
  SurfaceCochains cs = surface_cochains(src), ct = surface_cochains(tgt);
  if (vertex_map.size() != src.vertices) throw StructuralError("vertex map has the wrong length");
  std::set<std::size_t> image;
  for (auto v : vertex_map) {
    if (v >= tgt.vertices) throw StructuralError("vertex map sends a vertex outside the target");
    if (!image.insert(v).second) throw StructuralError("vertex map is not injective at target vertex " + std::to_string(v));
  }
  for (std::size_t k = 0; k + 1 < src.vertex_order.size(); ++k) {
    std::size_t a = src.vertex_order[k], b = src.vertex_order[k + 1];
    if (ct.position[vertex_map[a]] > ct.position[vertex_map[b]])
      throw StructuralError("vertex map does not preserve the vertex order at vertices " + std::to_string(a) + ", " +
                            std::to_string(b));
  }
  std::set<Tri> image_tris;
  for (const auto &t : src.triangles) {
    Tri img{vertex_map[t[0]], vertex_map[t[1]], vertex_map[t[2]]};
    auto it = ct.triangle_index.find(sorted(img));
    if (it == ct.triangle_index.end())
      throw StructuralError("triangle " + tri_str(t) + " does not map onto a target triangle");
    if (permutation_sign(img, tgt.triangles[it->second]) != 1)
      throw StructuralError("triangle " + tri_str(t) + " maps with reversed orientation");
    image_tris.insert(sorted(img));
  }
  // star condition on the interior of the image
  auto star_inside = [&](auto contains, const std::string &what) {
    for (const auto &t : tgt.triangles)
      if (contains(t) && !image_tris.count(sorted(t)))
        throw StructuralError("star condition fails: target triangle " + tri_str(t) + " meets interior " + what +
                              " of the image but is not in the image");
  };
  for (auto v : cs.interior_vertices) {
    std::size_t w = vertex_map[v];
    if (!ct.vertex_index.count(w))
      throw StructuralError("interior vertex " + std::to_string(v) + " maps to the target boundary");
    star_inside([&](const Tri &t) { return std::find(t.begin(), t.end(), w) != t.end(); },
                "vertex " + std::to_string(w));
  }
  for (const auto &e : cs.interior_edges) {
    Edge w = ct.ordered(vertex_map[e[0]], vertex_map[e[1]]);
    if (!ct.edge_index.count(w)) throw StructuralError("interior edge " + edge_str(e) + " maps to the target boundary");
    star_inside(
        [&](const Tri &t) {
          return std::find(t.begin(), t.end(), w[0]) != t.end() && std::find(t.begin(), t.end(), w[1]) != t.end();
        },
        "edge " + edge_str(w));
  }
}

RationalMatrix extension_by_zero(const TriangulatedSurface &src, const TriangulatedSurface &tgt,
                                 const std::vector<std::size_t> &vertex_map) {
  check_surface_morphism(src, tgt, vertex_map);
  SurfaceCochains cs = surface_cochains(src), ct = surface_cochains(tgt);
  const std::size_t rows = ct.triangles.size() + ct.interior_edges.size() + ct.interior_vertices.size();
  const std::size_t cols = cs.triangles.size() + cs.interior_edges.size() + cs.interior_vertices.size();
  RationalMatrix m(rows, cols);
  for (std::size_t t = 0; t < cs.triangles.size(); ++t) {
    const auto &o = cs.triangles[t];
    Tri img = sorted({vertex_map[o[0]], vertex_map[o[1]], vertex_map[o[2]]});
    m.set(ct.flat_triangle(ct.triangle_index.at(img)), cs.flat_triangle(t), 1);
  }
  for (std::size_t e = 0; e < cs.interior_edges.size(); ++e) {
    const auto &[a, b] = cs.interior_edges[e];
    m.set(ct.flat_edge(ct.edge_index.at({vertex_map[a], vertex_map[b]})), cs.flat_edge(e), 1);
  }
  for (std::size_t v = 0; v < cs.interior_vertices.size(); ++v)
    m.set(ct.flat_vertex(ct.vertex_index.at(vertex_map[cs.interior_vertices[v]])), cs.flat_vertex(v), 1);
  return m;
}

std::set<std::array<std::size_t, 3>> image_interior(const TriangulatedSurface &src,
                                                    const std::vector<std::size_t> &vertex_map) {
  std::set<Tri> out;
  for (const auto &t : src.triangles) out.insert(sorted({vertex_map[t[0]], vertex_map[t[1]], vertex_map[t[2]]}));
  return out;
}

std::vector<SurfaceMorphism> composition_closure(const SurfaceDiagram &d) {
  std::vector<SurfaceMorphism> out = d.morphisms;
  for (const auto &m : out) {
    auto s = d.surfaces.find(m.src), t = d.surfaces.find(m.tgt);
    if (s == d.surfaces.end() || t == d.surfaces.end())
      throw StructuralError("morphism '" + m.name + "' refers to an unknown surface");
    check_surface_morphism(s->second, t->second, m.vertex_map);
  }
  auto is_identity = [](const SurfaceMorphism &m) {
    for (std::size_t v = 0; v < m.vertex_map.size(); ++v)
      if (m.vertex_map[v] != v) return false;
    return m.src == m.tgt;
  };
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const SurfaceMorphism &g = out[i], &f = out[j];
        if (f.tgt != g.src) continue;
        SurfaceMorphism gf{g.name + "*" + f.name, f.src, g.tgt, {}};
        for (auto v : f.vertex_map) gf.vertex_map.push_back(g.vertex_map[v]);
        if (is_identity(gf)) continue;
        bool known = std::any_of(out.begin(), out.end(), [&](const SurfaceMorphism &m) {
          return m.src == gf.src && m.tgt == gf.tgt && m.vertex_map == gf.vertex_map;
        });
        if (!known) {
          out.push_back(std::move(gf));
          grew = true;
        }
      }
  }
  return out;
}

FieldTheory build_bcs(const SurfaceDiagram &d) {
  std::vector<SurfaceMorphism> mors = composition_closure(d);
  std::vector<std::string> objects;
  for (const auto &[name, _] : d.surfaces) objects.push_back(name);
  std::vector<Morphism> cat;
  for (const auto &m : mors) cat.push_back({m.name, m.src, m.tgt});

  // every morphism as a vertex map, including identities
  std::map<std::string, const SurfaceMorphism *> by_name;
  std::vector<SurfaceMorphism> identities;
  for (const auto &[name, s] : d.surfaces) {
    SurfaceMorphism id{"id_" + name, name, name, std::vector<std::size_t>(s.vertices)};
    std::iota(id.vertex_map.begin(), id.vertex_map.end(), 0);
    identities.push_back(std::move(id));
  }
  for (const auto &m : identities) by_name[m.name] = &m;
  for (const auto &m : mors) by_name[m.name] = &m;
  auto canonical = [&](const std::string &src, const std::string &tgt, const std::vector<std::size_t> &map) {
    if (src == tgt && by_name.count("id_" + src) && by_name.at("id_" + src)->vertex_map == map) return "id_" + src;
    for (const auto &m : mors)
      if (m.src == src && m.tgt == tgt && m.vertex_map == map) return m.name;
    throw InternalError("composition closure is incomplete");
  };
  std::vector<std::array<std::string, 3>> compose;
  for (const auto &g : mors)
    for (const auto &f : mors) {
      if (f.tgt != g.src) continue;
      std::vector<std::size_t> map;
      for (auto v : f.vertex_map) map.push_back(g.vertex_map[v]);
      compose.push_back({g.name, f.name, canonical(f.src, g.tgt, map)});
    }
  std::vector<MorphismPair> seeds;
  for (const auto &[n1, m1] : by_name)
    for (const auto &[n2, m2] : by_name) {
      if (m1->tgt != m2->tgt) continue;
      auto a = image_interior(d.surfaces.at(m1->src), m1->vertex_map);
      auto b = image_interior(d.surfaces.at(m2->src), m2->vertex_map);
      if (std::none_of(a.begin(), a.end(), [&](const Tri &t) { return b.count(t) > 0; })) seeds.push_back({n1, n2});
    }
  FieldTheory ft{OrthCategory(objects, cat, compose, seeds), OperadKind::uLie, {}, {}, std::nullopt};
  std::map<std::string, ChainComplex> carriers;
  for (const auto &[name, s] : d.surfaces) {
    PresymplecticComplex v = cs_presymplectic(s);
    carriers.emplace(name, v.carrier);
    ft.algebras.emplace(name, heisenberg(v));
  }
  for (const auto &m : mors) {
    RationalMatrix ext = extension_by_zero(d.surfaces.at(m.src), d.surfaces.at(m.tgt), m.vertex_map);
    ft.actions.emplace(m.name,
                       heisenberg_map(ChainMap::from_flat(carriers.at(m.src), carriers.at(m.tgt), ext)).flat());
  }
  return ft;
}

FieldTheory build_acs(const SurfaceDiagram &d, std::size_t n) { return quantize(build_bcs(d), n); }

HomologyCcrReport compare_h0_with_ccr(const TriangulatedSurface &s, std::size_t n) {
  PresymplecticComplex v = cs_presymplectic(s);
  Homology h = homology(v.carrier, 0);
  const std::size_t off = v.carrier.flat_offset(0);
  std::vector<SparseVector> reps;
  for (const auto &z : h.representatives) {
    SparseVector flat;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (!z[i].is_zero()) flat.emplace(off + i, z[i]);
    reps.push_back(std::move(flat));
  }
  const std::size_t r = reps.size();
  PresymplecticComplex hv{ChainComplex::concentrated(0, r), {}};
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) hv.set(i, j, v.pair(reps[i], reps[j]));
  DgAlgebra big = heisenberg(v);
  RationalMatrix rho(big.dim(), r + 1);
  for (std::size_t i = 0; i < r; ++i)
    for (const auto &[k, c] : reps[i]) rho.set(heisenberg_index(v.carrier, k), i, c);
  rho.set(heisenberg_unit_index(v.carrier), r, 1);
  TruncatedEnvelope small_env = ccr(hv, n), big_env(big, n);
  ChainMap f = envelope_map(rho, small_env, big_env, n);
  HomologyCcrReport rep;
  rep.h0_lie = r;
  rep.ccr_dim = small_env.stage_basis(n).size();
  rep.h0_quantized = homology(f.target(), 0).dimension;
  rep.induced_rank = rank(induced_homology_map(f, 0));
  return rep;
}

} // namespace opq
