#include "ireg/linalg.hpp"

#include "ireg/error.hpp"

#include <cmath>
#include <string>

namespace ireg {

void require_finite(const Matrix& m, const char* what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw PreconditionError(std::string(what) + ": matrix must have at least one row and column");
  }
  if (!m.allFinite()) {
    throw PreconditionError(std::string(what) + ": matrix has non-finite entries");
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw PreconditionError(std::string(what) + ": vector has non-finite entries");
  }
}

SvdFactors svd(const Matrix& m) {
  require_finite(m, "svd");
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeFullV);
  SvdFactors f{dec.matrixU(), dec.singularValues(), dec.matrixV()};

  // Sign convention: largest-magnitude entry of each v_i is positive.
  const Index r = f.sigma.size();
  for (Index i = 0; i < f.V.cols(); ++i) {
    Index imax = 0;
    f.V.col(i).cwiseAbs().maxCoeff(&imax);
    if (f.V(imax, i) < 0.0) {
      f.V.col(i) *= -1.0;
      if (i < r) f.U.col(i) *= -1.0;
    }
  }
  return f;
}

Vector singular_values(const Matrix& m) {
  require_finite(m, "singular_values");
  Eigen::BDCSVD<Matrix> dec(m);
  return dec.singularValues();
}

double two_norm(const Matrix& m) {
  require_finite(m, "two_norm");
  if (m.cols() == 1) return m.col(0).norm();
  if (m.rows() == 1) return m.row(0).norm();
  return singular_values(m)(0);
}

Matrix lower_bidiagonal(std::span<const double> alpha, std::span<const double> beta) {
  if (alpha.size() != beta.size()) {
    throw PreconditionError("lower_bidiagonal: alpha and beta must have equal length");
  }
  const auto k = static_cast<Index>(alpha.size());
  Matrix b = Matrix::Zero(k + 1, k);
  for (Index j = 0; j < k; ++j) {
    b(j, j) = alpha[j];
    b(j + 1, j) = beta[j];
  }
  return b;
}

Vector lstsq_lower_bidiagonal(std::span<const double> alpha, std::span<const double> beta,
                              const Vector& rhs, double* residual_norm) {
  const auto k = static_cast<Index>(alpha.size());
  if (k < 1 || static_cast<Index>(beta.size()) != k || rhs.size() != k + 1) {
    throw PreconditionError("lstsq_lower_bidiagonal: expected (k+1) x k system with rhs of length k+1");
  }

  // Reduce to upper bidiagonal R (diag rho, superdiag theta) by rotating
  // rows (j, j+1) to annihilate the subdiagonal entry of column j.
  Vector rho(k), theta = Vector::Zero(k), f = rhs;
  double diag = alpha[0];
  for (Index j = 0; j < k; ++j) {
    const double sub = beta[j];
    const double r = std::hypot(diag, sub);
    if (r == 0.0 || !std::isfinite(r)) {
      throw NumericalError("lstsq_lower_bidiagonal: zero column " + std::to_string(j + 1));
    }
    const double c = diag / r;
    const double s = sub / r;
    rho(j) = r;
    const double fj = f(j);
    const double fj1 = f(j + 1);
    f(j) = c * fj + s * fj1;
    f(j + 1) = -s * fj + c * fj1;
    if (j + 1 < k) {
      // Row j+1 holds alpha_{j+2} in column j+1; row j has zero there.
      theta(j) = s * alpha[j + 1];
      diag = c * alpha[j + 1];
    }
  }

  Vector y(k);
  for (Index j = k - 1; j >= 0; --j) {
    double t = f(j);
    if (j + 1 < k) t -= theta(j) * y(j + 1);
    y(j) = t / rho(j);
  }
  if (residual_norm != nullptr) *residual_norm = std::abs(f(k));
  return y;
}

Vector lstsq_lower_bidiagonal(const Matrix& b, const Vector& rhs) {
  require_finite(b, "lstsq_lower_bidiagonal");
  const Index k = b.cols();
  if (b.rows() != k + 1) {
    throw PreconditionError("lstsq_lower_bidiagonal: B must be (k+1) x k");
  }
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < k + 1; ++i) {
      if (i != j && i != j + 1 && b(i, j) != 0.0) {
        throw PreconditionError("lstsq_lower_bidiagonal: B is not lower bidiagonal");
      }
    }
  }
  Vector alpha = b.diagonal();
  Vector beta(k);
  for (Index j = 0; j < k; ++j) beta(j) = b(j + 1, j);
  return lstsq_lower_bidiagonal(std::span<const double>(alpha.data(), k),
                                std::span<const double>(beta.data(), k), rhs);
}

}  // namespace ireg
