#include "opq/matrix.hpp"

#include "opq/errors.hpp"

#include <algorithm>
#include <limits>

namespace opq {

void add_entry(SparseVector &acc, std::size_t index, const Rational &c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc.try_emplace(index, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

void add_scaled(SparseVector &acc, const SparseVector &v, const Rational &c) {
  if (c.is_zero()) return;
  for (const auto &[i, x] : v) add_entry(acc, i, x * c);
}

SparseVector scaled(const SparseVector &v, const Rational &c) {
  SparseVector out;
  if (c.is_zero()) return out;
  for (const auto &[i, x] : v) out.emplace(i, x * c);
  return out;
}

SparseVector to_sparse(const Vector &v) {
  SparseVector out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) out.emplace(i, v[i]);
  return out;
}

Vector to_dense(const SparseVector &v, std::size_t size) {
  Vector out(size);
  for (const auto &[i, x] : v) {
    if (i >= size) throw StructuralError("sparse vector index out of range");
    out[i] = x;
  }
  return out;
}

bool is_zero(const Vector &v) {
  return std::all_of(v.begin(), v.end(), [](const Rational &x) { return x.is_zero(); });
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace(i, Rational(1));
  return m;
}

RationalMatrix RationalMatrix::from_dense(const std::vector<std::vector<Rational>> &rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RationalMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw StructuralError("ragged dense matrix");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

RationalMatrix RationalMatrix::from_triplets(std::size_t rows, std::size_t cols, const std::vector<Triplet> &entries) {
  RationalMatrix m(rows, cols);
  for (const auto &t : entries) m.add(t.row, t.col, t.value);
  return m;
}

RationalMatrix RationalMatrix::from_columns(std::size_t rows, const std::vector<Vector> &columns) {
  RationalMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw StructuralError("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r)
      if (!columns[c][r].is_zero()) m.data_[r].emplace(c, columns[c][r]);
  }
  return m;
}

Rational RationalMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw StructuralError("matrix index out of range");
  auto it = data_[r].find(c);
  return it == data_[r].end() ? Rational(0) : it->second;
}

void RationalMatrix::set(std::size_t r, std::size_t c, const Rational &v) {
  if (r >= rows_ || c >= cols_) throw StructuralError("matrix index out of range");
  if (v.is_zero())
    data_[r].erase(c);
  else
    data_[r][c] = v;
}

void RationalMatrix::add(std::size_t r, std::size_t c, const Rational &v) {
  if (r >= rows_ || c >= cols_) throw StructuralError("matrix index out of range");
  add_entry(data_[r], c, v);
}

Vector RationalMatrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto it = data_[r].find(c);
    if (it != data_[r].end()) out[r] = it->second;
  }
  return out;
}

std::vector<Triplet> RationalMatrix::triplets() const {
  std::vector<Triplet> out;
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto &[c, v] : data_[r]) out.push_back({r, c, v});
  return out;
}

std::size_t RationalMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto &row : data_) n += row.size();
  return n;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const SparseVector &r) { return r.empty(); });
}

bool RationalMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (data_[r].size() != 1) return false;
    const auto &[c, v] = *data_[r].begin();
    if (c != r || v != Rational(1)) return false;
  }
  return true;
}

Vector RationalMatrix::apply(const Vector &x) const {
  if (x.size() != cols_) throw StructuralError("matrix-vector shape mismatch");
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto &[c, v] : data_[r])
      if (!x[c].is_zero()) out[r] += v * x[c];
  return out;
}

SparseVector RationalMatrix::apply(const SparseVector &x) const {
  SparseVector out;
  if (x.empty()) return out;
  if (x.rbegin()->first >= cols_) throw StructuralError("matrix-vector shape mismatch");
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational acc;
    bool touched = false;
    for (const auto &[c, v] : data_[r]) {
      auto it = x.find(c);
      if (it != x.end()) {
        acc += v * it->second;
        touched = true;
      }
    }
    if (touched && !acc.is_zero()) out.emplace(r, acc);
  }
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto &[c, v] : data_[r]) t.data_[c].emplace(r, v);
  return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix &o) const {
  if (cols_ != o.rows_) throw StructuralError("matrix product shape mismatch");
  RationalMatrix out(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto &[k, v] : data_[r]) add_scaled(out.data_[r], o.data_[k], v);
  return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix &o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw StructuralError("matrix sum shape mismatch");
  RationalMatrix out = *this;
  for (std::size_t r = 0; r < rows_; ++r) add_scaled(out.data_[r], o.data_[r], Rational(1));
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix &o) const { return *this + o.scaled(Rational(-1)); }

RationalMatrix RationalMatrix::scaled(const Rational &c) const {
  RationalMatrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) out.data_[r] = opq::scaled(data_[r], c);
  return out;
}

RationalMatrix RationalMatrix::block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw StructuralError("matrix block out of range");
  RationalMatrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (auto it = data_[r0 + r].lower_bound(c0); it != data_[r0 + r].end() && it->first < c0 + nc; ++it)
      out.data_[r].emplace(it->first - c0, it->second);
  return out;
}

std::vector<std::vector<Rational>> RationalMatrix::to_dense() const {
  std::vector<std::vector<Rational>> out(rows_, std::vector<Rational>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto &[c, v] : data_[r]) out[r][c] = v;
  return out;
}

namespace {

struct Elimination {
  std::vector<SparseVector> rows;
  std::vector<std::size_t> pivots;
};

// Gauss-Jordan on sparse rows. With `reduce` false only rows below the pivot are cleared.
Elimination eliminate(std::vector<SparseVector> rows, bool reduce) {
  Elimination e;
  std::size_t pr = 0;
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  while (pr < rows.size()) {
    std::size_t best_col = none, best_row = none;
    for (std::size_t r = pr; r < rows.size(); ++r) {
      if (rows[r].empty()) continue;
      std::size_t lead = rows[r].begin()->first;
      if (lead < best_col) {
        best_col = lead;
        best_row = r;
      }
    }
    if (best_row == none) break;
    std::swap(rows[pr], rows[best_row]);
    Rational inv = Rational(1) / rows[pr].begin()->second;
    for (auto &[c, v] : rows[pr]) v *= inv;
    const SparseVector &pivot = rows[pr];
    for (std::size_t r = reduce ? 0 : pr + 1; r < rows.size(); ++r) {
      if (r == pr) continue;
      auto it = rows[r].find(best_col);
      if (it == rows[r].end()) continue;
      Rational f = -it->second;
      add_scaled(rows[r], pivot, f);
    }
    e.pivots.push_back(best_col);
    ++pr;
  }
  e.rows = std::move(rows);
  return e;
}

std::vector<SparseVector> rows_of(const RationalMatrix &m) {
  std::vector<SparseVector> rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows[r] = m.row(r);
  return rows;
}

} // namespace

RrefResult rref(const RationalMatrix &m) {
  Elimination e = eliminate(rows_of(m), true);
  RrefResult out;
  out.rank = e.pivots.size();
  out.pivot_columns = e.pivots;
  out.reduced = RationalMatrix(m.rows(), m.cols());
  for (std::size_t r = 0; r < e.rows.size(); ++r)
    for (const auto &[c, v] : e.rows[r]) out.reduced.set(r, c, v);
  return out;
}

std::size_t rank(const RationalMatrix &m) { return eliminate(rows_of(m), false).pivots.size(); }

std::vector<Vector> kernel_basis(const RationalMatrix &m) {
  Elimination e = eliminate(rows_of(m), true);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = Rational(1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
      auto it = e.rows[i].find(f);
      if (it != e.rows[i].end()) v[e.pivots[i]] = -it->second;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve(const RationalMatrix &m, const Vector &b) {
  if (b.size() != m.rows()) throw StructuralError("solve: right-hand side length mismatch");
  std::vector<SparseVector> rows = rows_of(m);
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!b[r].is_zero()) rows[r].emplace(m.cols(), b[r]);
  Elimination e = eliminate(std::move(rows), true);
  Vector x(m.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == m.cols()) return std::nullopt;
    auto it = e.rows[i].find(m.cols());
    if (it != e.rows[i].end()) x[e.pivots[i]] = it->second;
  }
  return x;
}

std::optional<RationalMatrix> inverse(const RationalMatrix &m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  std::vector<SparseVector> rows = rows_of(m);
  for (std::size_t r = 0; r < n; ++r) rows[r].emplace(n + r, Rational(1));
  Elimination e = eliminate(std::move(rows), true);
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] >= n)) return std::nullopt;
  RationalMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (auto it = e.rows[r].lower_bound(n); it != e.rows[r].end(); ++it) inv.set(r, it->first - n, it->second);
  return inv;
}

} // namespace opq
