#pragma once

#include "ireg/linalg.hpp"

#include <Eigen/QR>

#include <cstdint>
#include <random>

namespace ireg::test {

using Rng = std::mt19937_64;

inline Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = d(rng);
  return m;
}

inline Vector gaussian_vector(Index n, Rng& rng) { return gaussian(n, 1, rng).col(0); }

// Haar-ish orthogonal factor from the QR of a Gaussian matrix.
inline Matrix random_orthogonal(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

// m x n matrix with prescribed singular values (length n, m >= n).
inline Matrix with_singular_values(const Vector& s, Index m, Rng& rng) {
  const Index n = s.size();
  const Matrix u = random_orthogonal(m, rng).leftCols(n);
  const Matrix v = random_orthogonal(n, rng);
  return u * s.asDiagonal() * v.transpose();
}

// Distinct singular values 1 > s_2 > ... decaying geometrically with ratio r.
inline Vector geometric(Index n, double r) {
  Vector s(n);
  for (Index i = 0; i < n; ++i) s(i) = std::pow(r, static_cast<double>(i));
  return s;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace ireg::test
