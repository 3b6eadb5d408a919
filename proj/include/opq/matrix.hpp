#pragma once

#include "opq/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

namespace opq {

/// Dense vector over Q.
using Vector = std::vector<Rational>;

/// Sparse vector over Q; absent keys are zero, stored values are never zero.
using SparseVector = std::map<std::size_t, Rational>;

void add_scaled(SparseVector &acc, const SparseVector &v, const Rational &c);
void add_entry(SparseVector &acc, std::size_t index, const Rational &c);
SparseVector scaled(const SparseVector &v, const Rational &c);
SparseVector to_sparse(const Vector &v);
Vector to_dense(const SparseVector &v, std::size_t size);
bool is_zero(const Vector &v);

struct Triplet {
  std::size_t row;
  std::size_t col;
  Rational value;
  friend bool operator==(const Triplet &, const Triplet &) = default;
};

/// Sparse exact-rational matrix stored as sparse rows.
class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_dense(const std::vector<std::vector<Rational>> &rows);
  static RationalMatrix from_triplets(std::size_t rows, std::size_t cols, const std::vector<Triplet> &entries);
  /// Matrix whose columns are the given vectors (each of length `rows`).
  static RationalMatrix from_columns(std::size_t rows, const std::vector<Vector> &columns);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  [[nodiscard]] Rational at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Rational &v);
  void add(std::size_t r, std::size_t c, const Rational &v);

  [[nodiscard]] const SparseVector &row(std::size_t r) const { return data_[r]; }
  [[nodiscard]] Vector column(std::size_t c) const;
  /// Entries in row-major order.
  [[nodiscard]] std::vector<Triplet> triplets() const;
  [[nodiscard]] std::size_t nonzeros() const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_identity() const;

  [[nodiscard]] Vector apply(const Vector &x) const;
  [[nodiscard]] SparseVector apply(const SparseVector &x) const;
  [[nodiscard]] RationalMatrix transpose() const;
  [[nodiscard]] RationalMatrix operator*(const RationalMatrix &o) const;
  [[nodiscard]] RationalMatrix operator+(const RationalMatrix &o) const;
  [[nodiscard]] RationalMatrix operator-(const RationalMatrix &o) const;
  [[nodiscard]] RationalMatrix scaled(const Rational &c) const;
  /// Rows [r0, r0+nr) x columns [c0, c0+nc).
  [[nodiscard]] RationalMatrix block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const;
  [[nodiscard]] std::vector<std::vector<Rational>> to_dense() const;

  friend bool operator==(const RationalMatrix &a, const RationalMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseVector> data_;
};

struct RrefResult {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
  RationalMatrix reduced;
};

/// Reduced row-echelon form. Pivot = first row (top-down) with a nonzero entry in the
/// leftmost remaining column, so every derived basis is reproducible.
RrefResult rref(const RationalMatrix &m);
std::size_t rank(const RationalMatrix &m);

/// Basis of the null space; one vector per free column, with a 1 in that column.
std::vector<Vector> kernel_basis(const RationalMatrix &m);

/// Some x with m x = b (free variables zero), or nullopt when b is not in the column space.
std::optional<Vector> solve(const RationalMatrix &m, const Vector &b);

/// Square matrix inverse, nullopt if singular.
std::optional<RationalMatrix> inverse(const RationalMatrix &m);

} // namespace opq
