#pragma once

// Shared generators for randomized tests.

#include "opq/complex.hpp"
#include "opq/matrix.hpp"

#include <random>

namespace opq::testing {

inline Rational small_rational(std::mt19937_64 &rng, int range = 5) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 3);
  return Rational(num(rng), den(rng));
}

inline RationalMatrix random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols, double density = 0.5,
                                    int range = 4) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> val(-range, range);
  RationalMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (keep(rng)) m.set(r, c, Rational(val(rng)));
  return m;
}

inline RationalMatrix random_invertible(std::mt19937_64 &rng, std::size_t n) {
  for (;;) {
    RationalMatrix m = random_matrix(rng, n, n, 0.6, 3);
    if (inverse(m)) return m;
  }
}

/// Random valid complex: a direct sum of elementary pieces (Q in one degree, or
/// Q --id--> Q across two degrees) conjugated by random invertible changes of basis.
inline ChainComplex random_complex(std::mt19937_64 &rng, std::size_t max_total_dim, int min_deg = -1,
                                   int max_deg = 2) {
  std::uniform_int_distribution<std::size_t> total(1, max_total_dim);
  std::uniform_int_distribution<int> deg(min_deg, max_deg);
  std::bernoulli_distribution pair(0.5);
  std::size_t budget = total(rng);
  std::map<int, std::size_t> dims;
  std::vector<std::tuple<int, std::size_t, std::size_t>> arrows; // degree n, index in n, index in n-1
  while (budget > 0) {
    int n = deg(rng);
    if (budget >= 2 && pair(rng) && n > min_deg) {
      arrows.emplace_back(n, dims[n]++, dims[n - 1]++);
      budget -= 2;
    } else {
      dims[n]++;
      budget -= 1;
    }
  }
  std::map<int, RationalMatrix> diffs;
  for (auto [n, i, j] : arrows) {
    auto [it, _] = diffs.try_emplace(n, dims[n - 1], dims[n]);
    it->second.set(j, i, Rational(1));
  }
  // conjugate by random bases: d'_n = P_{n-1} d_n P_n^{-1}
  std::map<int, RationalMatrix> basis, basis_inv;
  for (auto [n, k] : dims) {
    basis[n] = random_invertible(rng, k);
    basis_inv[n] = *inverse(basis[n]);
  }
  for (auto &[n, m] : diffs) m = basis[n - 1] * m * basis_inv[n];
  return ChainComplex(dims, diffs);
}

} // namespace opq::testing
