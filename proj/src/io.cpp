#include "opq/io.hpp"

#include "opq/errors.hpp"

#include <fstream>
#include <sstream>

namespace opq::io {

namespace {

[[noreturn]] void fail(const std::string &where, const std::string &what) {
  throw ParseError((where.empty() ? std::string("/") : where) + ": " + what);
}

const json &field(const json &j, const std::string &key, const std::string &where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing key '" + key + "'");
  return *it;
}

std::size_t index_from_json(const json &j, const std::string &where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

int degree_key(const std::string &key, const std::string &where) {
  try {
    std::size_t used = 0;
    int n = std::stoi(key, &used);
    if (used == key.size()) return n;
  } catch (const std::exception &) {
  }
  fail(where, "degree key '" + key + "' is not an integer");
}

std::string child(const std::string &where, const std::string &key) { return where + "/" + key; }
std::string child(const std::string &where, std::size_t k) { return where + "/" + std::to_string(k); }

std::string string_from_json(const json &j, const std::string &where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const json &array_at(const json &j, const std::string &where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

// [[i1, ..., ik, out, "p/q"], ...]
MultilinearMap multilinear_from_json(const json &j, std::size_t arity, std::size_t dim, const std::string &where) {
  MultilinearMap m{arity, {}};
  array_at(j, where);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string at = child(where, r);
    const json &e = array_at(j[r], at);
    if (e.size() != arity + 2) fail(at, "expected " + std::to_string(arity + 2) + " entries");
    std::vector<std::size_t> in;
    for (std::size_t k = 0; k <= arity; ++k) {
      std::size_t idx = index_from_json(e[k], child(at, k));
      if (idx >= dim) fail(child(at, k), "basis index out of range");
      in.push_back(idx);
    }
    std::size_t out = in.back();
    in.pop_back();
    m.add(in, out, rational_from_json(e[arity + 1], child(at, arity + 1)));
  }
  return m;
}

json multilinear_to_json(const MultilinearMap &m) {
  json out = json::array();
  for (const auto &[in, v] : m.table)
    for (const auto &[k, q] : v) {
      json e = json::array();
      for (auto i : in) e.push_back(i);
      e.push_back(k);
      e.push_back(to_json(q));
      out.push_back(e);
    }
  return out;
}

const std::map<std::string, std::string> kOpKeys{{"mu", kMu}, {"bracket", kBracket}, {"pbracket", kPoisson}};

} // namespace

json load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error &e) {
    throw ParseError(path + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Rational rational_from_json(const json &j, const std::string &where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(where, "expected a rational string \"p/q\" or an integer");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception &e) {
    fail(where, e.what());
  }
}

RationalMatrix matrix_from_json(const json &j, std::size_t rows, std::size_t cols, const std::string &where) {
  RationalMatrix m(rows, cols);
  array_at(j, where);
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = child(where, k);
    const json &e = array_at(j[k], at);
    if (e.size() != 3) fail(at, "expected [row, col, value]");
    std::size_t r = index_from_json(e[0], child(at, 0)), c = index_from_json(e[1], child(at, 1));
    if (r >= rows || c >= cols)
      fail(at, "entry outside a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    m.add(r, c, rational_from_json(e[2], child(at, 2)));
  }
  return m;
}

ChainComplex complex_from_json(const json &j, const std::string &where) {
  std::map<int, std::size_t> dims;
  const std::string dw = child(where, "dims");
  const json &jd = field(j, "dims", where);
  if (!jd.is_object()) fail(dw, "expected an object");
  for (const auto &[key, v] : jd.items()) dims[degree_key(key, dw)] = index_from_json(v, child(dw, key));
  auto dim = [&](int n) { return dims.count(n) ? dims.at(n) : std::size_t{0}; };
  std::map<int, RationalMatrix> d;
  if (j.contains("d")) {
    const std::string w = child(where, "d");
    if (!j["d"].is_object()) fail(w, "expected an object");
    for (const auto &[key, v] : j["d"].items()) {
      int n = degree_key(key, w);
      d[n] = matrix_from_json(v, dim(n - 1), dim(n), child(w, key));
    }
  }
  try {
    return ChainComplex(dims, d);
  } catch (const StructuralError &e) {
    fail(where, e.what());
  }
}

DgAlgebra algebra_from_json(const json &j, const std::string &where) {
  OperadKind kind;
  try {
    kind = parse_kind(string_from_json(field(j, "kind", where), child(where, "kind")));
  } catch (const ParseError &e) {
    fail(child(where, "kind"), e.what());
  }
  ChainComplex carrier = complex_from_json(field(j, "carrier", where), child(where, "carrier"));
  const std::size_t dim = carrier.total_dim();
  std::map<std::string, MultilinearMap> ops;
  for (const auto &[key, name] : kOpKeys)
    if (j.contains(key)) ops.emplace(name, multilinear_from_json(j[key], 2, dim, child(where, key)));
  if (j.contains("unit")) ops.emplace(kEta, multilinear_from_json(j["unit"], 0, dim, child(where, "unit")));
  std::optional<WordFiltration> filt;
  if (j.contains("filtration")) {
    const std::string w = child(where, "filtration");
    WordFiltration f;
    const json &len = array_at(field(j["filtration"], "length", w), child(w, "length"));
    for (std::size_t k = 0; k < len.size(); ++k) f.length.push_back(index_from_json(len[k], child(child(w, "length"), k)));
    if (f.length.size() != dim) fail(child(w, "length"), "expected one length per basis vector");
    f.bound = index_from_json(field(j["filtration"], "bound", w), child(w, "bound"));
    filt = f;
  }
  try {
    return DgAlgebra(carrier, kind, ops, filt);
  } catch (const StructuralError &e) {
    fail(where, e.what());
  }
}

PresymplecticComplex presymplectic_from_json(const json &j, const std::string &where) {
  PresymplecticComplex v{complex_from_json(field(j, "carrier", where), child(where, "carrier")), {}};
  const std::size_t dim = v.carrier.total_dim();
  const std::string w = child(where, "omega");
  const json &om = array_at(field(j, "omega", where), w);
  for (std::size_t k = 0; k < om.size(); ++k) {
    const std::string at = child(w, k);
    const json &e = array_at(om[k], at);
    if (e.size() != 3) fail(at, "expected [i, j, value]");
    std::size_t a = index_from_json(e[0], child(at, 0)), b = index_from_json(e[1], child(at, 1));
    if (a >= dim || b >= dim) fail(at, "basis index out of range");
    v.set(a, b, v.pair(a, b) + rational_from_json(e[2], child(at, 2)));
  }
  return v;
}

FieldTheory theory_from_json(const json &j, const std::string &where) {
  std::vector<std::string> objects;
  const std::string ow = child(where, "objects");
  const json &jo = array_at(field(j, "objects", where), ow);
  for (std::size_t k = 0; k < jo.size(); ++k) objects.push_back(string_from_json(jo[k], child(ow, k)));

  std::vector<Morphism> morphisms;
  if (j.contains("morphisms")) {
    const std::string mw = child(where, "morphisms");
    const json &jm = array_at(j["morphisms"], mw);
    for (std::size_t k = 0; k < jm.size(); ++k) {
      const std::string at = child(mw, k);
      morphisms.push_back({string_from_json(field(jm[k], "name", at), child(at, "name")),
                           string_from_json(field(jm[k], "src", at), child(at, "src")),
                           string_from_json(field(jm[k], "tgt", at), child(at, "tgt"))});
    }
  }
  auto triples = [&](const std::string &key, std::size_t width) {
    std::vector<std::vector<std::string>> out;
    if (!j.contains(key)) return out;
    const std::string w = child(where, key);
    const json &a = array_at(j[key], w);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string at = child(w, k);
      const json &e = array_at(a[k], at);
      if (e.size() != width) fail(at, "expected " + std::to_string(width) + " names");
      std::vector<std::string> names;
      for (std::size_t i = 0; i < width; ++i) names.push_back(string_from_json(e[i], child(at, i)));
      out.push_back(names);
    }
    return out;
  };
  std::vector<std::array<std::string, 3>> compose;
  for (const auto &t : triples("compose", 3)) compose.push_back({t[0], t[1], t[2]});
  std::vector<MorphismPair> seeds;
  for (const auto &t : triples("orth", 2)) seeds.emplace_back(t[0], t[1]);

  FieldTheory ft;
  try {
    ft.base = OrthCategory(objects, morphisms, compose, seeds);
  } catch (const StructuralError &e) {
    fail(where, e.what());
  }
  const bool presymplectic = j.contains("presymplectic");
  const std::string aw = child(where, presymplectic ? "presymplectic" : "algebras");
  const json &ja = field(j, presymplectic ? "presymplectic" : "algebras", where);
  if (!ja.is_object()) fail(aw, "expected an object keyed by object name");
  std::map<std::string, ChainComplex> carriers;
  for (const auto &o : objects) {
    if (!ja.contains(o)) fail(aw, "no algebra for object '" + o + "'");
    if (presymplectic) {
      PresymplecticComplex v = presymplectic_from_json(ja[o], child(aw, o));
      carriers.emplace(o, v.carrier);
      ft.algebras.emplace(o, heisenberg(v));
    } else {
      ft.algebras.emplace(o, algebra_from_json(ja[o], child(aw, o)));
      carriers.emplace(o, ft.algebras.at(o).carrier());
    }
  }
  ft.kind = presymplectic ? OperadKind::uLie : ft.algebras.at(objects.front()).kind();
  if (j.contains("actions")) {
    const std::string w = child(where, "actions");
    if (!j["actions"].is_object()) fail(w, "expected an object keyed by morphism name");
    for (const auto &[name, v] : j["actions"].items()) {
      if (!ft.base.morphisms().count(name)) fail(child(w, name), "unknown morphism");
      const Morphism &m = ft.base.morphism(name);
      const ChainComplex &s = carriers.at(m.src), &t = carriers.at(m.tgt);
      RationalMatrix f = matrix_from_json(v, t.total_dim(), s.total_dim(), child(w, name));
      if (presymplectic) {
        try {
          f = heisenberg_map(ChainMap::from_flat(s, t, f)).flat();
        } catch (const StructuralError &e) {
          fail(child(w, name), e.what());
        }
      }
      ft.actions.emplace(name, f);
    }
  }
  return ft;
}

TriangulatedSurface surface_from_json(const json &j, const std::string &where) {
  TriangulatedSurface s;
  s.vertices = index_from_json(field(j, "vertices", where), child(where, "vertices"));
  auto indices = [&](const std::string &key, std::size_t width, auto push) {
    const std::string w = child(where, key);
    const json &a = array_at(field(j, key, where), w);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string at = child(w, k);
      if (width == 0) {
        push(std::vector<std::size_t>{index_from_json(a[k], at)});
        continue;
      }
      const json &e = array_at(a[k], at);
      if (e.size() != width) fail(at, "expected " + std::to_string(width) + " vertices");
      std::vector<std::size_t> v;
      for (std::size_t i = 0; i < width; ++i) v.push_back(index_from_json(e[i], child(at, i)));
      push(v);
    }
  };
  if (j.contains("vertex_order"))
    indices("vertex_order", 0, [&](const auto &v) { s.vertex_order.push_back(v[0]); });
  else
    for (std::size_t v = 0; v < s.vertices; ++v) s.vertex_order.push_back(v);
  indices("triangles", 3, [&](const auto &v) { s.triangles.push_back({v[0], v[1], v[2]}); });
  if (j.contains("boundary_edges"))
    indices("boundary_edges", 2, [&](const auto &v) { s.boundary_edges.push_back({v[0], v[1]}); });
  return s;
}

SurfaceDiagram diagram_from_json(const json &j, const std::string &where) {
  SurfaceDiagram d;
  const std::string sw = child(where, "surfaces");
  const json &js = field(j, "surfaces", where);
  if (!js.is_object()) fail(sw, "expected an object keyed by surface name");
  for (const auto &[name, v] : js.items()) d.surfaces.emplace(name, surface_from_json(v, child(sw, name)));
  if (j.contains("morphisms")) {
    const std::string mw = child(where, "morphisms");
    const json &jm = array_at(j["morphisms"], mw);
    for (std::size_t k = 0; k < jm.size(); ++k) {
      const std::string at = child(mw, k);
      SurfaceMorphism m{string_from_json(field(jm[k], "name", at), child(at, "name")),
                        string_from_json(field(jm[k], "src", at), child(at, "src")),
                        string_from_json(field(jm[k], "tgt", at), child(at, "tgt")),
                        {}};
      const std::string vw = child(at, "vertex_map");
      const json &vm = array_at(field(jm[k], "vertex_map", at), vw);
      for (std::size_t i = 0; i < vm.size(); ++i) m.vertex_map.push_back(index_from_json(vm[i], child(vw, i)));
      d.morphisms.push_back(std::move(m));
    }
  }
  return d;
}

json to_json(const Rational &q) { return q.str(); }

json to_json(const RationalMatrix &m) {
  json out = json::array();
  for (const auto &t : m.triplets()) out.push_back({t.row, t.col, to_json(t.value)});
  return out;
}

json to_json(const ChainComplex &c) {
  json dims = json::object(), d = json::object();
  for (const auto &[n, k] : c.dims())
    if (k > 0) dims[std::to_string(n)] = k;
  for (const auto &[n, m] : c.stored_differentials())
    if (!m.is_zero()) d[std::to_string(n)] = to_json(m);
  return {{"dims", dims}, {"d", d}};
}

json to_json(const DgAlgebra &a) {
  json out = {{"kind", to_string(a.kind())}, {"carrier", to_json(a.carrier())}};
  for (const auto &[key, name] : kOpKeys)
    if (a.has_op(name)) out[key] = multilinear_to_json(a.op(name));
  if (a.has_op(kEta)) out["unit"] = multilinear_to_json(a.op(kEta));
  if (a.filtration()) out["filtration"] = {{"length", a.filtration()->length}, {"bound", a.filtration()->bound}};
  return out;
}

json to_json(const PresymplecticComplex &v) {
  json om = json::array();
  for (const auto &[ij, q] : v.omega)
    if (!q.is_zero()) om.push_back({ij.first, ij.second, to_json(q)});
  return {{"carrier", to_json(v.carrier)}, {"omega", om}};
}

json to_json(const TriangulatedSurface &s) {
  json tris = json::array(), edges = json::array();
  for (const auto &t : s.triangles) tris.push_back({t[0], t[1], t[2]});
  for (const auto &e : s.boundary_edges) edges.push_back({e[0], e[1]});
  return {{"vertices", s.vertices}, {"vertex_order", s.vertex_order}, {"triangles", tris}, {"boundary_edges", edges}};
}

DocumentKind classify(const json &j) {
  if (!j.is_object()) return DocumentKind::Unknown;
  if (j.contains("surfaces")) return DocumentKind::Diagram;
  if (j.contains("triangles")) return DocumentKind::Surface;
  if (j.contains("objects")) return DocumentKind::Theory;
  if (j.contains("kind")) return DocumentKind::Algebra;
  if (j.contains("omega")) return DocumentKind::Presymplectic;
  if (j.contains("dims")) return DocumentKind::Complex;
  return DocumentKind::Unknown;
}

} // namespace opq::io
