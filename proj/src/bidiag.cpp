#include "ireg/bidiag.hpp"

#include "ireg/error.hpp"
#include "ireg/matrix_io.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace ireg {
namespace {

// Two passes of modified Gram-Schmidt of v against the first `count`
// columns of basis.
void reorthogonalize(Vector& v, const Matrix& basis, Index count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Index i = 0; i < count; ++i) v -= basis.col(i).dot(v) * basis.col(i);
  }
}

// A unit vector orthogonal to the first `count` columns of basis, used to
// complete P when beta_{k+1} vanishes exactly.
Vector orthogonal_completion(const Matrix& basis, Index count) {
  const Index m = basis.rows();
  for (Index i = 0; i < m; ++i) {
    Vector v = Vector::Unit(m, i);
    reorthogonalize(v, basis, count);
    const double nv = v.norm();
    if (nv > 0.5) return v / nv;
  }
  return Vector::Zero(m);
}

}  // namespace

Matrix BidiagFactors::B(Index j) const {
  if (j < 1 || j > k) throw PreconditionError("BidiagFactors::B: index out of range");
  return lower_bidiagonal(std::span<const double>(alpha.data(), static_cast<std::size_t>(j)),
                          std::span<const double>(beta.data(), static_cast<std::size_t>(j)));
}

double estimate_two_norm(const Matrix& a, int iterations) {
  Vector x = Vector::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
  double est = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector y = a.transpose() * (a * x);
    const double ny = y.norm();
    if (ny == 0.0) break;
    x = y / ny;
    est = std::sqrt(ny);
  }
  if (est == 0.0) est = a.norm();
  return est;
}

BidiagFactors bidiagonalize(const Matrix& a, const Vector& b, Index kmax, const BidiagOptions& opts) {
  require_finite(a, "bidiagonalize");
  require_finite(b, "bidiagonalize");
  const Index m = a.rows();
  const Index n = a.cols();
  if (b.size() != m) throw PreconditionError("bidiagonalize: b has wrong length");
  if (kmax < 1 || kmax > n) throw PreconditionError("bidiagonalize: kmax must lie in [1, n]");
  const double bnorm = b.norm();
  if (!(bnorm > 0.0)) throw PreconditionError("bidiagonalize: b must be nonzero");

  const bool full = opts.reorth == Reorth::full;
  const double tol = opts.breakdown_tol * estimate_two_norm(a);

  BidiagFactors f;
  f.b_norm = bnorm;
  f.P = Matrix::Zero(m, kmax + 1);
  f.Q = Matrix::Zero(n, kmax);
  f.alpha = Vector::Zero(kmax);
  f.beta = Vector::Zero(kmax);
  f.P.col(0) = b / bnorm;

  Index steps = 0;
  double beta_prev = 0.0;
  for (Index j = 0; j < kmax; ++j) {
    Vector r = a.transpose() * f.P.col(j);
    if (j > 0) r -= beta_prev * f.Q.col(j - 1);
    if (full) reorthogonalize(r, f.Q, j);
    const double alpha = r.norm();
    if (!(alpha > tol)) {
      f.terminated_early = true;
      f.breakdown_step = j + 1;
      break;
    }
    f.alpha(j) = alpha;
    f.Q.col(j) = r / alpha;

    Vector z = a * f.Q.col(j) - alpha * f.P.col(j);
    if (full) reorthogonalize(z, f.P, j + 1);
    const double beta = z.norm();
    f.beta(j) = beta;
    steps = j + 1;
    if (!(beta > tol)) {
      f.terminated_early = true;
      f.breakdown_step = j + 1;
      if (beta > 0.0) {
        z /= beta;
        reorthogonalize(z, f.P, j + 1);
        const double nz = z.norm();
        f.P.col(j + 1) = nz > 0.5 ? Vector(z / nz) : orthogonal_completion(f.P, j + 1);
      } else {
        f.P.col(j + 1) = orthogonal_completion(f.P, j + 1);
      }
      break;
    }
    f.P.col(j + 1) = z / beta;
    beta_prev = beta;
  }

  f.k = steps;
  f.P.conservativeResize(m, steps + 1);
  f.Q.conservativeResize(n, steps);
  f.alpha.conservativeResize(steps);
  f.beta.conservativeResize(steps);
  if (steps == 0) {
    throw NumericalError("bidiagonalize: A^T b vanishes, no Krylov direction");
  }

  // One more half step gives alpha_{k+1} q_{k+1} for the second recurrence.
  f.q_next = Vector::Zero(n);
  if (!f.terminated_early && steps < n) {
    Vector r = a.transpose() * f.P.col(steps) - f.beta(steps - 1) * f.Q.col(steps - 1);
    if (full) reorthogonalize(r, f.Q, steps);
    f.alpha_next = r.norm();
    if (f.alpha_next > 0.0) f.q_next = r / f.alpha_next;
  }
  return f;
}

Vector ritz_values(const BidiagFactors& f, Index k) {
  if (k < 1 || k > f.k) {
    throw PreconditionError("ritz_values: k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(f.k) + "]");
  }
  return singular_values(f.B(k));
}

void write_entries_csv(std::ostream& out, const BidiagFactors& f) {
  out << "k,alpha,beta\n";
  for (Index j = 0; j < f.k; ++j) {
    out << (j + 1) << ',' << format_double(f.alpha(j)) << ',' << format_double(f.beta(j)) << '\n';
  }
}

}  // namespace ireg
