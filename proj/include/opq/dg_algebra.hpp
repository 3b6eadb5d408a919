#pragma once

#include "opq/complex.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace opq {

enum class OperadKind { As, Lie, uLie, Pois };

std::string to_string(OperadKind kind);
OperadKind parse_kind(const std::string &name);

// Structure-map names shared by algebras and operad alphabets.
inline constexpr const char *kMu = "mu";
inline constexpr const char *kEta = "eta";
inline constexpr const char *kBracket = "bracket";
inline constexpr const char *kPoisson = "pbracket";

/// Multilinear map on a flat basis: tuple of input basis indices -> output vector.
struct MultilinearMap {
  std::size_t arity = 0;
  std::map<std::vector<std::size_t>, SparseVector> table;

  void add(std::vector<std::size_t> inputs, std::size_t output, const Rational &c);
  friend bool operator==(const MultilinearMap &, const MultilinearMap &) = default;
};

/// Word-length filtration on a basis. Binary operations on basis pairs whose
/// lengths sum past `bound` are undefined and raise TruncationOverflow.
struct WordFiltration {
  std::vector<std::size_t> length;
  std::size_t bound = 0;
  friend bool operator==(const WordFiltration &, const WordFiltration &) = default;
};

/// Finite-dimensional dg algebra given by structure constants on the carrier's flat basis.
class DgAlgebra {
public:
  DgAlgebra() = default;
  DgAlgebra(ChainComplex carrier, OperadKind kind, std::map<std::string, MultilinearMap> ops,
            std::optional<WordFiltration> filtration = std::nullopt);

  [[nodiscard]] const ChainComplex &carrier() const { return carrier_; }
  [[nodiscard]] OperadKind kind() const { return kind_; }
  [[nodiscard]] const std::map<std::string, MultilinearMap> &ops() const { return ops_; }
  [[nodiscard]] bool has_op(const std::string &name) const { return ops_.count(name) > 0; }
  [[nodiscard]] const MultilinearMap &op(const std::string &name) const;
  [[nodiscard]] const std::optional<WordFiltration> &filtration() const { return filtration_; }

  [[nodiscard]] std::size_t dim() const { return degrees_.size(); }
  [[nodiscard]] int degree(std::size_t flat) const { return degrees_.at(flat); }
  [[nodiscard]] const std::vector<int> &degrees() const { return degrees_; }
  [[nodiscard]] const RationalMatrix &differential() const { return d_; }

  /// Multilinear extension of a structure map.
  SparseVector apply(const std::string &name, std::span<const SparseVector> args) const;
  SparseVector apply_basis(const std::string &name, std::span<const std::size_t> inputs) const;
  [[nodiscard]] SparseVector unit() const;
  [[nodiscard]] SparseVector d(const SparseVector &v) const { return d_.apply(v); }
  /// Whether a product of these basis elements stays inside the filtration bound.
  [[nodiscard]] bool fits(std::span<const std::size_t> inputs) const;

  friend bool operator==(const DgAlgebra &a, const DgAlgebra &b) {
    return a.kind_ == b.kind_ && a.carrier_ == b.carrier_ && a.ops_ == b.ops_ && a.filtration_ == b.filtration_;
  }

private:
  ChainComplex carrier_;
  OperadKind kind_ = OperadKind::As;
  std::map<std::string, MultilinearMap> ops_;
  std::optional<WordFiltration> filtration_;
  std::vector<int> degrees_;
  RationalMatrix d_;
};

/// Basis vector e_i.
inline SparseVector basis_vector(std::size_t i) { return SparseVector{{i, Rational(1)}}; }

/// Splits v into homogeneous components keyed by degree.
std::map<int, SparseVector> homogeneous_parts(const SparseVector &v, const std::vector<int> &degrees);

} // namespace opq
