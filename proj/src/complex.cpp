#include "opq/complex.hpp"

#include "opq/errors.hpp"

#include <set>

namespace opq {

ChainComplex::ChainComplex(std::map<int, std::size_t> dims, std::map<int, RationalMatrix> differentials)
    : dims_(std::move(dims)), d_(std::move(differentials)) {
  for (auto it = d_.begin(); it != d_.end();) {
    const auto &[n, m] = *it;
    if (m.rows() != dim(n - 1) || m.cols() != dim(n))
      throw StructuralError("differential d_" + std::to_string(n) + " has shape " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected " + std::to_string(dim(n - 1)) + "x" +
                            std::to_string(dim(n)));
    it = m.is_zero() ? d_.erase(it) : std::next(it);
  }
  for (auto it = dims_.begin(); it != dims_.end();) it = it->second == 0 ? dims_.erase(it) : std::next(it);
}

ChainComplex ChainComplex::unit() { return concentrated(0, 1); }

ChainComplex ChainComplex::concentrated(int degree, std::size_t dim) { return ChainComplex({{degree, dim}}, {}); }

std::size_t ChainComplex::dim(int n) const {
  auto it = dims_.find(n);
  return it == dims_.end() ? 0 : it->second;
}

std::vector<int> ChainComplex::support() const {
  std::vector<int> out;
  for (const auto &[n, k] : dims_)
    if (k > 0) out.push_back(n);
  return out;
}

RationalMatrix ChainComplex::differential(int n) const {
  auto it = d_.find(n);
  if (it != d_.end()) return it->second;
  return RationalMatrix(dim(n - 1), dim(n));
}

std::size_t ChainComplex::total_dim() const {
  std::size_t t = 0;
  for (const auto &[n, k] : dims_) t += k;
  return t;
}

std::size_t ChainComplex::flat_offset(int n) const {
  std::size_t off = 0;
  for (const auto &[m, k] : dims_) {
    if (m >= n) break;
    off += k;
  }
  return off;
}

int ChainComplex::degree_of(std::size_t flat) const {
  for (const auto &[n, k] : dims_) {
    if (flat < k) return n;
    flat -= k;
  }
  throw StructuralError("flat index out of range");
}

std::vector<int> ChainComplex::flat_degrees() const {
  std::vector<int> out;
  out.reserve(total_dim());
  for (const auto &[n, k] : dims_) out.insert(out.end(), k, n);
  return out;
}

RationalMatrix ChainComplex::flat_differential() const {
  RationalMatrix out(total_dim(), total_dim());
  for (const auto &[n, m] : d_) {
    std::size_t r0 = flat_offset(n - 1), c0 = flat_offset(n);
    for (const auto &t : m.triplets()) out.set(r0 + t.row, c0 + t.col, t.value);
  }
  return out;
}

bool operator==(const ChainComplex &a, const ChainComplex &b) {
  if (a.dims_ != b.dims_) return false;
  return a.d_ == b.d_;
}

ComplexReport validate_complex(const ChainComplex &c) {
  ComplexReport report;
  for (int n : c.support()) {
    RationalMatrix dn = c.differential(n);
    if (dn.rows() != c.dim(n - 1) || dn.cols() != c.dim(n)) throw StructuralError("differential shape mismatch");
    if (c.dim(n - 2) == 0 && c.dim(n - 1) == 0) continue;
    if (!(c.differential(n - 1) * dn).is_zero()) report.failing_degrees.push_back(n);
  }
  return report;
}

namespace {

struct HomologyFrame {
  std::vector<Vector> reps;
  std::vector<Vector> boundaries; // independent columns spanning im d_{n+1}
};

HomologyFrame homology_frame(const ChainComplex &c, int n) {
  HomologyFrame frame;
  const std::size_t dn = c.dim(n);
  if (dn == 0) return frame;
  std::vector<Vector> cycles = kernel_basis(c.differential(n));
  if (cycles.empty()) return frame;
  if (c.dim(n + 1) > 0) {
    RationalMatrix up = c.differential(n + 1);
    for (std::size_t p : rref(up).pivot_columns) frame.boundaries.push_back(up.column(p));
  }
  std::vector<Vector> cols = frame.boundaries;
  cols.insert(cols.end(), cycles.begin(), cycles.end());
  RrefResult r = rref(RationalMatrix::from_columns(dn, cols));
  const std::size_t nb = frame.boundaries.size();
  for (std::size_t p : r.pivot_columns)
    if (p >= nb) frame.reps.push_back(cycles[p - nb]);
  return frame;
}

} // namespace

Homology homology(const ChainComplex &c, int n) {
  HomologyFrame f = homology_frame(c, n);
  return {f.reps.size(), std::move(f.reps)};
}

std::map<int, std::size_t> homology_dims(const ChainComplex &c) {
  std::map<int, std::size_t> out;
  for (int n : c.support()) {
    std::size_t z = c.dim(n) - rank(c.differential(n));
    std::size_t b = c.dim(n + 1) == 0 ? 0 : rank(c.differential(n + 1));
    out[n] = z - b;
  }
  return out;
}

long euler_characteristic(const ChainComplex &c) {
  long chi = 0;
  for (const auto &[n, k] : c.dims()) chi += koszul_sign(n) * static_cast<long>(k);
  return chi;
}

ChainMap::ChainMap(ChainComplex source, ChainComplex target, std::map<int, RationalMatrix> components)
    : source_(std::move(source)), target_(std::move(target)), f_(std::move(components)) {
  for (auto it = f_.begin(); it != f_.end();) {
    const auto &[n, m] = *it;
    if (m.rows() != target_.dim(n) || m.cols() != source_.dim(n))
      throw StructuralError("chain map component in degree " + std::to_string(n) + " has wrong shape");
    it = m.is_zero() ? f_.erase(it) : std::next(it);
  }
}

ChainMap ChainMap::identity(const ChainComplex &c) {
  std::map<int, RationalMatrix> comps;
  for (int n : c.support()) comps.emplace(n, RationalMatrix::identity(c.dim(n)));
  return ChainMap(c, c, std::move(comps));
}

ChainMap ChainMap::zero(const ChainComplex &source, const ChainComplex &target) { return ChainMap(source, target, {}); }

ChainMap ChainMap::from_flat(const ChainComplex &source, const ChainComplex &target, const RationalMatrix &flat) {
  if (flat.rows() != target.total_dim() || flat.cols() != source.total_dim())
    throw StructuralError("flat chain map has wrong shape");
  std::vector<int> sdeg = source.flat_degrees(), tdeg = target.flat_degrees();
  std::map<int, RationalMatrix> comps;
  for (const auto &t : flat.triplets()) {
    int n = sdeg[t.col];
    if (tdeg[t.row] != n) throw StructuralError("map does not preserve degree at entry (" + std::to_string(t.row) + "," + std::to_string(t.col) + ")");
    auto [it, _] = comps.try_emplace(n, target.dim(n), source.dim(n));
    it->second.set(t.row - target.flat_offset(n), t.col - source.flat_offset(n), t.value);
  }
  return ChainMap(source, target, std::move(comps));
}

RationalMatrix ChainMap::component(int n) const {
  auto it = f_.find(n);
  if (it != f_.end()) return it->second;
  return RationalMatrix(target_.dim(n), source_.dim(n));
}

RationalMatrix ChainMap::flat() const {
  RationalMatrix out(target_.total_dim(), source_.total_dim());
  for (const auto &[n, m] : f_) {
    std::size_t r0 = target_.flat_offset(n), c0 = source_.flat_offset(n);
    for (const auto &t : m.triplets()) out.set(r0 + t.row, c0 + t.col, t.value);
  }
  return out;
}

std::vector<int> ChainMap::non_commuting_degrees() const {
  std::vector<int> bad;
  for (int n : source_.support()) {
    if (target_.dim(n - 1) == 0) continue;
    if (!(target_.differential(n) * component(n) == component(n - 1) * source_.differential(n))) bad.push_back(n);
  }
  return bad;
}

ChainMap compose(const ChainMap &g, const ChainMap &f) {
  if (!(f.target() == g.source())) throw StructuralError("compose: target/source mismatch");
  std::map<int, RationalMatrix> comps;
  for (int n : f.source().support()) comps.emplace(n, g.component(n) * f.component(n));
  return ChainMap(f.source(), g.target(), std::move(comps));
}

RationalMatrix induced_homology_map(const ChainMap &f, int n) {
  HomologyFrame src = homology_frame(f.source(), n);
  HomologyFrame tgt = homology_frame(f.target(), n);
  RationalMatrix out(tgt.reps.size(), src.reps.size());
  if (src.reps.empty() || tgt.reps.empty()) return out;
  std::vector<Vector> cols = tgt.reps;
  cols.insert(cols.end(), tgt.boundaries.begin(), tgt.boundaries.end());
  RationalMatrix frame = RationalMatrix::from_columns(f.target().dim(n), cols);
  RationalMatrix fn = f.component(n);
  for (std::size_t j = 0; j < src.reps.size(); ++j) {
    auto x = solve(frame, fn.apply(src.reps[j]));
    if (!x) throw InternalError("image of a cycle is not a cycle in degree " + std::to_string(n));
    for (std::size_t i = 0; i < tgt.reps.size(); ++i) out.set(i, j, (*x)[i]);
  }
  return out;
}

QuasiIsoReport quasi_iso_report(const ChainMap &f) {
  std::set<int> degrees;
  for (int n : f.source().support()) degrees.insert(n);
  for (int n : f.target().support()) degrees.insert(n);
  QuasiIsoReport report;
  for (int n : degrees) {
    RationalMatrix h = induced_homology_map(f, n);
    std::size_t r = rank(h);
    if (h.rows() != h.cols() || r != h.rows()) {
      report.quasi_iso = false;
      report.witness_degree = n;
      report.source_homology = h.cols();
      report.target_homology = h.rows();
      report.induced_rank = r;
      return report;
    }
  }
  return report;
}

bool is_quasi_iso(const ChainMap &f) { return quasi_iso_report(f).quasi_iso; }

ChainComplex tensor(const ChainComplex &c, const ChainComplex &d) {
  std::map<int, std::size_t> dims;
  // offsets[n][p] = start of the (p, n-p) block inside degree n
  std::map<int, std::map<int, std::size_t>> offsets;
  for (const auto &[p, cp] : c.dims())
    for (const auto &[q, dq] : d.dims()) {
      (void)cp;
      (void)dq;
      offsets[p + q][p] = 0;
    }
  for (auto &[n, blocks] : offsets) {
    std::size_t off = 0;
    for (auto &[p, start] : blocks) {
      start = off;
      off += c.dim(p) * d.dim(n - p);
    }
    dims[n] = off;
  }
  std::map<int, RationalMatrix> diffs;
  for (const auto &[n, blocks] : offsets) {
    if (!offsets.count(n - 1)) continue;
    RationalMatrix m(dims[n - 1], dims[n]);
    const auto &lower = offsets.at(n - 1);
    for (const auto &[p, start] : blocks) {
      const int q = n - p;
      const std::size_t dq = d.dim(q);
      RationalMatrix dc = c.differential(p), dd = d.differential(q);
      // dx ⊗ y lands in block (p-1, q)
      if (c.dim(p - 1) > 0)
        for (const auto &t : dc.triplets())
          for (std::size_t j = 0; j < dq; ++j)
            m.add(lower.at(p - 1) + t.row * dq + j, start + t.col * dq + j, t.value);
      // (-1)^p x ⊗ dy lands in block (p, q-1)
      if (d.dim(q - 1) > 0) {
        const std::size_t dq1 = d.dim(q - 1);
        const Rational s(koszul_sign(p));
        for (std::size_t i = 0; i < c.dim(p); ++i)
          for (const auto &t : dd.triplets())
            m.add(lower.at(p) + i * dq1 + t.row, start + i * dq + t.col, s * t.value);
      }
    }
    diffs.emplace(n, std::move(m));
  }
  return ChainComplex(std::move(dims), std::move(diffs));
}

ChainComplex shift(const ChainComplex &c, int k) {
  std::map<int, std::size_t> dims;
  for (const auto &[n, m] : c.dims()) dims[n + k] = m;
  std::map<int, RationalMatrix> diffs;
  const Rational s(koszul_sign(k));
  for (const auto &[n, m] : c.stored_differentials()) diffs.emplace(n + k, m.scaled(s));
  return ChainComplex(std::move(dims), std::move(diffs));
}

ChainComplex direct_sum(const ChainComplex &a, const ChainComplex &b) {
  std::map<int, std::size_t> dims = a.dims();
  for (const auto &[n, k] : b.dims()) dims[n] += k;
  std::map<int, RationalMatrix> diffs;
  std::set<int> degrees;
  for (const auto &[n, k] : dims) degrees.insert(n);
  for (int n : degrees) {
    if (!dims.count(n - 1)) continue;
    RationalMatrix m(dims[n - 1], dims[n]);
    for (const auto &t : a.differential(n).triplets()) m.set(t.row, t.col, t.value);
    for (const auto &t : b.differential(n).triplets()) m.set(a.dim(n - 1) + t.row, a.dim(n) + t.col, t.value);
    diffs.emplace(n, std::move(m));
  }
  return ChainComplex(std::move(dims), std::move(diffs));
}

} // namespace opq
