#pragma once

#include "opq/matrix.hpp"

#include <map>
#include <string>
#include <vector>

namespace opq {

/// Z-graded complex of finite-dimensional Q-vector spaces, homological grading:
/// d_n maps degree n to degree n-1 and is stored as a dims(n-1) x dims(n) matrix.
///
/// Elements are addressed either per degree (degree, local index) or through the
/// flat basis, which lists degrees in ascending order.
class ChainComplex {
public:
  ChainComplex() = default;
  ChainComplex(std::map<int, std::size_t> dims, std::map<int, RationalMatrix> differentials);

  /// Q concentrated in degree 0.
  static ChainComplex unit();
  /// Q^dim concentrated in one degree.
  static ChainComplex concentrated(int degree, std::size_t dim);

  [[nodiscard]] std::size_t dim(int n) const;
  /// Degrees with nonzero dimension, ascending.
  [[nodiscard]] std::vector<int> support() const;
  [[nodiscard]] const std::map<int, std::size_t> &dims() const { return dims_; }
  /// d_n as a dims(n-1) x dims(n) matrix (zero when not stored).
  [[nodiscard]] RationalMatrix differential(int n) const;
  [[nodiscard]] const std::map<int, RationalMatrix> &stored_differentials() const { return d_; }

  [[nodiscard]] std::size_t total_dim() const;
  [[nodiscard]] std::size_t flat_offset(int n) const;
  [[nodiscard]] int degree_of(std::size_t flat) const;
  /// Degree of every flat basis vector.
  [[nodiscard]] std::vector<int> flat_degrees() const;
  /// Whole differential on the flat basis.
  [[nodiscard]] RationalMatrix flat_differential() const;

  friend bool operator==(const ChainComplex &a, const ChainComplex &b);

private:
  std::map<int, std::size_t> dims_;
  std::map<int, RationalMatrix> d_;
};

/// Per-degree list of problems; empty iff the complex satisfies d∘d = 0.
struct ComplexReport {
  std::vector<int> failing_degrees; // degrees n where d_{n-1} d_n != 0
  [[nodiscard]] bool ok() const { return failing_degrees.empty(); }
};

/// Throws StructuralError on a shape mismatch between dims and a stored matrix.
ComplexReport validate_complex(const ChainComplex &c);

struct Homology {
  std::size_t dimension = 0;
  std::vector<Vector> representatives; // cycles in degree n whose classes form a basis
};

Homology homology(const ChainComplex &c, int n);
/// Homology dimension for every degree in the support.
std::map<int, std::size_t> homology_dims(const ChainComplex &c);
long euler_characteristic(const ChainComplex &c);

/// Chain map with components f_n : source_n -> target_n.
class ChainMap {
public:
  ChainMap() = default;
  ChainMap(ChainComplex source, ChainComplex target, std::map<int, RationalMatrix> components);

  static ChainMap identity(const ChainComplex &c);
  static ChainMap zero(const ChainComplex &source, const ChainComplex &target);
  /// Builds the per-degree components from a matrix on the flat bases. Throws if the
  /// matrix mixes degrees.
  static ChainMap from_flat(const ChainComplex &source, const ChainComplex &target, const RationalMatrix &flat);

  [[nodiscard]] const ChainComplex &source() const { return source_; }
  [[nodiscard]] const ChainComplex &target() const { return target_; }
  /// f_n as a target.dim(n) x source.dim(n) matrix (zero when not stored).
  [[nodiscard]] RationalMatrix component(int n) const;
  [[nodiscard]] RationalMatrix flat() const;
  /// Degrees where the square fails to commute; empty iff this is a chain map.
  [[nodiscard]] std::vector<int> non_commuting_degrees() const;

private:
  ChainComplex source_;
  ChainComplex target_;
  std::map<int, RationalMatrix> f_;
};

/// g ∘ f.
ChainMap compose(const ChainMap &g, const ChainMap &f);

/// Matrix of H_n(f) in the representative bases chosen by `homology`.
RationalMatrix induced_homology_map(const ChainMap &f, int n);

struct QuasiIsoReport {
  bool quasi_iso = true;
  int witness_degree = 0;           // first failing degree, when !quasi_iso
  std::size_t source_homology = 0;  // dims at the witness degree
  std::size_t target_homology = 0;
  std::size_t induced_rank = 0;
};

QuasiIsoReport quasi_iso_report(const ChainMap &f);
bool is_quasi_iso(const ChainMap &f);

/// Tensor product with the Koszul-signed differential d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy.
/// The basis of degree n lists (p, i, j) lexicographically with p+q = n.
ChainComplex tensor(const ChainComplex &c, const ChainComplex &d);

/// (c[k])_n = c_{n-k} with differential (-1)^k d.
ChainComplex shift(const ChainComplex &c, int k);

ChainComplex direct_sum(const ChainComplex &a, const ChainComplex &b);

} // namespace opq
