#pragma once

#include <cstdint>
#include <random>

#include <anderson/linalg.hpp>

namespace anderson::testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vector random_vector(std::mt19937_64& g, Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(g);
  return v;
}

inline DenseMatrix random_matrix(std::mt19937_64& g, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = normal(g);
  return M;
}

inline Vector random_unit(std::mt19937_64& g, Index n) {
  Vector v = random_vector(g, n);
  return v / v.norm();
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

}  // namespace anderson::testing
