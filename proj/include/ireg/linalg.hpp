#pragma once

#include <Eigen/Dense>

#include <span>

namespace ireg {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Full singular value decomposition M = U * diag(sigma) * V^T.
///
/// U is m x min(m,n) (thin when m > n), V is n x n, sigma is descending.
/// Each column of V is signed so that its entry of largest magnitude is
/// positive; the matching column of U is flipped along with it.
struct SvdFactors {
  Matrix U;
  Vector sigma;
  Matrix V;
};

/// Throws PreconditionError if the matrix is empty or has a non-finite entry.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

SvdFactors svd(const Matrix& m);

/// Singular values only, descending.
Vector singular_values(const Matrix& m);

/// Spectral norm sigma_1(M). Zero for the zero matrix.
double two_norm(const Matrix& m);

/// Minimum-residual solution of min ||B y - rhs|| for a lower-bidiagonal
/// (k+1) x k matrix B, computed with Givens rotations (B^T B is never formed).
Vector lstsq_lower_bidiagonal(const Matrix& b, const Vector& rhs);

/// Same as above with B given by its diagonal alpha (length k) and
/// subdiagonal beta (length k). If residual_norm is non-null it receives
/// ||B y - rhs||.
Vector lstsq_lower_bidiagonal(std::span<const double> alpha, std::span<const double> beta,
                              const Vector& rhs, double* residual_norm = nullptr);

/// Assembles the (k+1) x k lower-bidiagonal matrix with the given diagonal
/// and subdiagonal.
Matrix lower_bidiagonal(std::span<const double> alpha, std::span<const double> beta);

}  // namespace ireg
