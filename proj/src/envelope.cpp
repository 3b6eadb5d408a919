#include "opq/envelope.hpp"

#include "opq/errors.hpp"

#include <algorithm>

namespace opq {

void add_term(PBWElement &acc, const Monomial &m, const Rational &c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

void add_scaled(PBWElement &acc, const PBWElement &v, const Rational &c) {
  if (c.is_zero()) return;
  for (const auto &[m, x] : v) add_term(acc, m, c * x);
}

TruncatedEnvelope::TruncatedEnvelope(DgAlgebra source, std::size_t truncation,
                                     std::optional<std::vector<std::size_t>> order)
    : source_(std::move(source)), truncation_(truncation) {
  if (!source_.has_op(kEta) || !source_.has_op(kBracket))
    throw StructuralError("envelope needs a unital Lie algebra (bracket and eta)");
  unit_ = source_.unit();
  if (unit_.empty()) throw StructuralError("the unit of the source algebra is zero");
  const std::size_t n = source_.dim();
  if (order) {
    std::vector<bool> seen(n, false);
    for (auto i : *order) {
      if (i >= n || seen[i]) throw StructuralError("generator order is not a list of distinct basis indices");
      seen[i] = true;
    }
    if (order->size() + 1 != n) throw StructuralError("generator order must leave out exactly one basis index");
    unit_direction_ = static_cast<std::size_t>(std::find(seen.begin(), seen.end(), false) - seen.begin());
    if (!unit_.count(unit_direction_))
      throw StructuralError("the basis index left out of the generators does not span the unit direction");
    generators_ = *order;
  } else {
    unit_direction_ = unit_.rbegin()->first;
    for (std::size_t i = 0; i < n; ++i)
      if (i != unit_direction_) generators_.push_back(i);
  }
  gen_of_source_.assign(n, -1);
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    gen_of_source_[generators_[g]] = static_cast<long>(g);
    gen_degree_.push_back(source_.degree(generators_[g]));
  }
  const std::size_t m = generators_.size();
  brackets_.assign(m, std::vector<PBWElement>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<std::size_t> in{generators_[i], generators_[j]};
      brackets_[i][j] = embed(source_.apply_basis(kBracket, in));
    }
  for (std::size_t g = 0; g < m; ++g) d_gen_.push_back(embed(source_.d(basis_vector(generators_[g]))));
}

TruncatedEnvelope::TruncatedEnvelope(const TruncatedEnvelope &o)
    : source_(o.source_), truncation_(o.truncation_), generators_(o.generators_), gen_degree_(o.gen_degree_),
      unit_direction_(o.unit_direction_), gen_of_source_(o.gen_of_source_), unit_(o.unit_), brackets_(o.brackets_),
      d_gen_(o.d_gen_) {
  std::lock_guard lock(o.memo_mutex_);
  memo_ = o.memo_;
}

int TruncatedEnvelope::degree(const Monomial &m) const {
  int d = 0;
  for (auto g : m) d += gen_degree_.at(g);
  return d;
}

bool TruncatedEnvelope::is_normal(const Monomial &m) const {
  for (std::size_t p = 0; p + 1 < m.size(); ++p) {
    if (m[p] > m[p + 1]) return false;
    if (m[p] == m[p + 1] && gen_degree_[m[p]] % 2 != 0) return false;
  }
  return true;
}

PBWElement TruncatedEnvelope::embed(const SparseVector &v) const {
  PBWElement out;
  const Rational uk = unit_.at(unit_direction_);
  for (const auto &[i, c] : v) {
    if (i != unit_direction_) {
      add_term(out, Monomial{static_cast<std::size_t>(gen_of_source_.at(i))}, c);
      continue;
    }
    // b_k = (1 - Σ_{i≠k} u_i b_i) / u_k
    add_term(out, Monomial{}, c / uk);
    for (const auto &[j, uj] : unit_)
      if (j != unit_direction_) add_term(out, Monomial{static_cast<std::size_t>(gen_of_source_[j])}, -c * uj / uk);
  }
  return out;
}

void TruncatedEnvelope::check_length(std::size_t len) const {
  if (len > truncation_)
    throw TruncationOverflow("word of length " + std::to_string(len) + " exceeds truncation bound " +
                             std::to_string(truncation_));
}

PBWElement TruncatedEnvelope::left_mul(std::size_t i, const PBWElement &a) const {
  PBWElement out;
  for (const auto &[m, c] : a) add_scaled(out, left_mul(i, m), c);
  return out;
}

PBWElement TruncatedEnvelope::left_mul(std::size_t i, const Monomial &m) const {
  if (m.empty() || i < m[0] || (i == m[0] && gen_degree_[i] % 2 == 0)) {
    Monomial out{i};
    out.insert(out.end(), m.begin(), m.end());
    return {{out, Rational(1)}};
  }
  auto key = std::make_pair(i, m);
  {
    std::lock_guard lock(memo_mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const std::size_t j = m[0];
  Monomial rest(m.begin() + 1, m.end());
  // (short element) * rest, for elements of length at most one
  auto times_rest = [&](const PBWElement &x, const Rational &scale, PBWElement &acc) {
    for (const auto &[w, c] : x) {
      if (w.empty())
        add_term(acc, rest, scale * c);
      else
        add_scaled(acc, left_mul(w[0], rest), scale * c);
    }
  };
  PBWElement out;
  if (i == j) {
    // odd x: x x = ½[x, x]
    times_rest(brackets_[i][i], Rational(1, 2), out);
  } else {
    // x_i x_j = ε x_j x_i + [x_i, x_j]
    int eps = koszul_sign(static_cast<long>(gen_degree_[i]) * gen_degree_[j]);
    add_scaled(out, left_mul(j, left_mul(i, rest)), Rational(eps));
    times_rest(brackets_[i][j], Rational(1), out);
  }
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(std::move(key), out);
  return out;
}

PBWElement TruncatedEnvelope::normal_form(const std::vector<std::size_t> &word) const {
  check_length(word.size());
  for (auto g : word)
    if (g >= generators_.size()) throw StructuralError("generator index out of range");
  PBWElement out = one();
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = left_mul(*it, out);
  return out;
}

PBWElement TruncatedEnvelope::multiply(const PBWElement &a, const PBWElement &b) const {
  PBWElement out;
  for (const auto &[ma, ca] : a)
    for (const auto &[mb, cb] : b) {
      check_length(ma.size() + mb.size());
      PBWElement p{{mb, Rational(1)}};
      for (auto it = ma.rbegin(); it != ma.rend(); ++it) p = left_mul(*it, p);
      add_scaled(out, p, ca * cb);
    }
  return out;
}

PBWElement TruncatedEnvelope::differential(const PBWElement &a) const {
  PBWElement out;
  for (const auto &[m, c] : a) {
    long before = 0;
    for (std::size_t p = 0; p < m.size(); ++p) {
      for (const auto &[w, x] : d_gen_[m[p]]) {
        std::vector<std::size_t> word(m.begin(), m.begin() + static_cast<long>(p));
        word.insert(word.end(), w.begin(), w.end());
        word.insert(word.end(), m.begin() + static_cast<long>(p) + 1, m.end());
        add_scaled(out, normal_form(word), c * x * Rational(koszul_sign(before)));
      }
      before += gen_degree_[m[p]];
    }
  }
  return out;
}

std::vector<Monomial> TruncatedEnvelope::stage_basis(std::size_t n) const {
  std::vector<Monomial> out;
  Monomial cur;
  auto rec = [&](auto &self, std::size_t start) -> void {
    out.push_back(cur);
    if (cur.size() == n) return;
    for (std::size_t g = start; g < generators_.size(); ++g) {
      cur.push_back(g);
      self(self, gen_degree_[g] % 2 == 0 ? g : g + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), [&](const Monomial &a, const Monomial &b) {
    int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

namespace {

std::map<Monomial, std::size_t> index_of(const std::vector<Monomial> &basis) {
  std::map<Monomial, std::size_t> idx;
  for (std::size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], i);
  return idx;
}

} // namespace

ChainComplex TruncatedEnvelope::stage_complex(std::size_t n) const {
  const auto basis = stage_basis(n);
  std::map<int, std::size_t> dims;
  std::vector<std::size_t> local(basis.size());
  std::map<Monomial, std::size_t> where;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    local[i] = dims[degree(basis[i])]++;
    where.emplace(basis[i], i);
  }
  std::map<int, RationalMatrix> d;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    int p = degree(basis[i]);
    for (const auto &[m, c] : differential({{basis[i], Rational(1)}})) {
      auto [it, _] = d.try_emplace(p, dims.count(p - 1) ? dims[p - 1] : 0, dims[p]);
      it->second.set(local[where.at(m)], local[i], c);
    }
  }
  return ChainComplex(dims, d);
}

SparseVector TruncatedEnvelope::stage_coordinates(const PBWElement &a, std::size_t n) const {
  const auto idx = index_of(stage_basis(n));
  SparseVector out;
  for (const auto &[m, c] : a) {
    auto it = idx.find(m);
    if (it == idx.end()) throw TruncationOverflow("element does not lie in filtration stage " + std::to_string(n));
    add_entry(out, it->second, c);
  }
  return out;
}

PBWElement TruncatedEnvelope::from_stage_coordinates(const SparseVector &v, std::size_t n) const {
  const auto basis = stage_basis(n);
  PBWElement out;
  for (const auto &[i, c] : v) add_term(out, basis.at(i), c);
  return out;
}

DgAlgebra TruncatedEnvelope::as_dg_algebra() const {
  const auto basis = stage_basis(truncation_);
  const auto idx = index_of(basis);
  MultilinearMap mu{2, {}}, eta{0, {}};
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (basis[i].size() + basis[j].size() > truncation_) continue;
      for (const auto &[m, c] : multiply({{basis[i], Rational(1)}}, {{basis[j], Rational(1)}}))
        mu.add({i, j}, idx.at(m), c);
    }
  eta.add({}, idx.at(Monomial{}), Rational(1));
  WordFiltration filt;
  for (const auto &m : basis) filt.length.push_back(m.size());
  filt.bound = truncation_;
  return DgAlgebra(stage_complex(truncation_), OperadKind::As, {{kMu, mu}, {kEta, eta}}, filt);
}

std::string TruncatedEnvelope::monomial_str(const Monomial &m) const {
  if (m.empty()) return "1";
  std::string out;
  for (std::size_t p = 0; p < m.size();) {
    std::size_t q = p;
    while (q < m.size() && m[q] == m[p]) ++q;
    if (!out.empty()) out += "*";
    out += "e" + std::to_string(m[p] + 1);
    if (q - p > 1) out += "^" + std::to_string(q - p);
    p = q;
  }
  return out;
}

std::string TruncatedEnvelope::element_str(const PBWElement &a) const {
  if (a.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto &[m, c] : a) {
    Rational mag = c.sign() < 0 ? -c : c;
    out += first ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + ");
    if (m.empty())
      out += mag.str();
    else if (mag == Rational(1))
      out += monomial_str(m);
    else
      out += mag.str() + "*" + monomial_str(m);
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------- rewriting engine

PBWElement rewrite_normal_form(const TruncatedEnvelope &env, const std::vector<std::size_t> &word,
                               RewriteOrder order, std::mt19937_64 *rng) {
  if (word.size() > env.truncation())
    throw TruncationOverflow("word of length " + std::to_string(word.size()) + " exceeds truncation bound " +
                             std::to_string(env.truncation()));
  std::map<std::vector<std::size_t>, Rational> pending{{word, Rational(1)}};
  PBWElement done;
  auto reducible = [&](const std::vector<std::size_t> &w) {
    std::vector<std::size_t> pos;
    for (std::size_t p = 0; p + 1 < w.size(); ++p)
      if (w[p] > w[p + 1] || (w[p] == w[p + 1] && env.generator_degree(w[p]) % 2 != 0)) pos.push_back(p);
    return pos;
  };
  auto accumulate = [&](std::vector<std::size_t> w, const Rational &c) {
    if (c.is_zero()) return;
    auto [it, inserted] = pending.try_emplace(std::move(w), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) pending.erase(it);
    }
  };
  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    const auto &w = node.key();
    const Rational c = node.mapped();
    auto pos = reducible(w);
    if (pos.empty()) {
      add_term(done, w, c);
      continue;
    }
    std::size_t p = pos.front();
    if (order == RewriteOrder::Rightmost) p = pos.back();
    if (order == RewriteOrder::Random) {
      if (!rng) throw InternalError("random rewrite order needs a generator");
      p = pos[std::uniform_int_distribution<std::size_t>(0, pos.size() - 1)(*rng)];
    }
    const std::size_t a = w[p], b = w[p + 1];
    auto replace = [&](const Monomial &mid) {
      std::vector<std::size_t> out(w.begin(), w.begin() + static_cast<long>(p));
      out.insert(out.end(), mid.begin(), mid.end());
      out.insert(out.end(), w.begin() + static_cast<long>(p) + 2, w.end());
      return out;
    };
    Rational scale(1);
    if (a == b) {
      scale = Rational(1, 2);
    } else {
      int eps = koszul_sign(static_cast<long>(env.generator_degree(a)) * env.generator_degree(b));
      accumulate(replace({b, a}), c * Rational(eps));
    }
    for (const auto &[m, x] : env.bracket(a, b)) accumulate(replace(m), c * x * scale);
  }
  return done;
}

std::map<int, std::size_t> filtration_dim(const DgAlgebra &v, std::size_t n) {
  if (!v.has_op(kEta) || v.unit().empty()) throw StructuralError("filtration dimensions need a unital algebra");
  std::vector<int> degs = v.degrees();
  auto zero = std::find(degs.begin(), degs.end(), 0);
  if (zero == degs.end()) throw StructuralError("unit direction missing from degree 0");
  degs.erase(zero);
  // counts[length][degree]
  std::vector<std::map<int, std::size_t>> counts(n + 1);
  counts[0][0] = 1;
  for (int d : degs) {
    std::vector<std::map<int, std::size_t>> next(n + 1);
    const std::size_t max_copies = (d % 2 == 0) ? n : 1;
    for (std::size_t len = 0; len <= n; ++len)
      for (const auto &[deg, c] : counts[len])
        for (std::size_t k = 0; k <= max_copies && len + k <= n; ++k)
          next[len + k][deg + static_cast<int>(k) * d] += c;
    counts = std::move(next);
  }
  std::map<int, std::size_t> out;
  for (const auto &level : counts)
    for (const auto &[deg, c] : level) out[deg] += c;
  return out;
}

PBWElement envelope_image(const RationalMatrix &rho, const TruncatedEnvelope &src, const TruncatedEnvelope &tgt,
                          const PBWElement &a) {
  const RationalMatrix cols = rho.transpose();
  std::vector<PBWElement> images;
  for (auto s : src.generators()) images.push_back(tgt.embed(cols.row(s)));
  PBWElement out;
  for (const auto &[m, c] : a) {
    PBWElement p = tgt.one();
    for (auto it = m.rbegin(); it != m.rend(); ++it) p = tgt.multiply(images[*it], p);
    add_scaled(out, p, c);
  }
  return out;
}

ChainMap envelope_map(const RationalMatrix &rho, const TruncatedEnvelope &src, const TruncatedEnvelope &tgt,
                      std::size_t n) {
  if (!is_algebra_morphism(rho, src.source(), tgt.source()))
    throw StructuralError("envelope_map needs a morphism of unital Lie algebras");
  if (n > src.truncation() || n > tgt.truncation()) throw TruncationOverflow("stage beyond the truncation bound");
  const auto sb = src.stage_basis(n);
  const auto tb = index_of(tgt.stage_basis(n));
  RationalMatrix flat(tb.size(), sb.size());
  for (std::size_t j = 0; j < sb.size(); ++j)
    for (const auto &[m, c] : envelope_image(rho, src, tgt, {{sb[j], Rational(1)}})) flat.set(tb.at(m), j, c);
  return ChainMap::from_flat(src.stage_complex(n), tgt.stage_complex(n), flat);
}

TruncatedEnvelope ccr(const PresymplecticComplex &v, std::size_t truncation) {
  return TruncatedEnvelope(heisenberg(v), truncation);
}

RationalMatrix adjunction_forward(const TruncatedEnvelope &env, const DgAlgebra &a, const RationalMatrix &kappa) {
  if (!is_algebra_morphism(kappa, env.as_dg_algebra(), a))
    throw StructuralError("kappa is not an algebra map out of the envelope");
  const std::size_t n = env.source().dim();
  RationalMatrix rho(a.dim(), n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto &[k, c] : kappa.apply(env.stage_coordinates(env.embed(basis_vector(i)), env.truncation())))
      rho.set(k, i, c);
  return rho;
}

RationalMatrix adjunction_backward(const TruncatedEnvelope &env, const DgAlgebra &a, const RationalMatrix &rho) {
  if (a.kind() != OperadKind::As) throw StructuralError("adjunction target must be an As algebra");
  if (!is_algebra_morphism(rho, env.source(), commutator_functor(a)))
    throw StructuralError("rho is not a morphism of unital Lie algebras into the commutator algebra");
  const RationalMatrix cols = rho.transpose();
  std::vector<SparseVector> y;
  for (auto s : env.generators()) y.push_back(cols.row(s));
  auto product = [&](const SparseVector &l, const SparseVector &r) {
    std::vector<SparseVector> args{l, r};
    return a.apply(kMu, args);
  };
  // the subalgebra generated by the images must be reached by words of length <= N;
  // only vectors that enlarged the span need to be multiplied again
  std::vector<Vector> span{to_dense(a.unit(), a.dim())};
  std::vector<SparseVector> frontier{a.unit()};
  for (std::size_t k = 1; k <= env.truncation() + 1 && !frontier.empty(); ++k) {
    std::vector<SparseVector> grew;
    for (const auto &g : y)
      for (const auto &f : frontier) {
        SparseVector v = product(g, f);
        span.push_back(to_dense(v, a.dim()));
        if (rank(RationalMatrix::from_columns(a.dim(), span)) == span.size())
          grew.push_back(std::move(v));
        else
          span.pop_back();
      }
    if (k == env.truncation() + 1 && !grew.empty())
      throw TruncationOverflow("the algebra generated by the images does not stabilize within the truncation bound");
    frontier = std::move(grew);
  }
  const auto basis = env.stage_basis(env.truncation());
  RationalMatrix kappa(a.dim(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    SparseVector v = a.unit();
    for (auto it = basis[j].rbegin(); it != basis[j].rend(); ++it) v = product(y[*it], v);
    for (const auto &[k, c] : v) kappa.set(k, j, c);
  }
  return kappa;
}

} // namespace opq
