#pragma once

#include "ireg/linalg.hpp"

#include <iosfwd>

namespace ireg {

enum class Reorth { none, full };

/// Result of k steps of Lanczos (Golub-Kahan) bidiagonalization started from
/// p_1 = b / ||b||:
///
///   A Q_k = P_{k+1} B_k,   A^T P_{k+1} = Q_k B_k^T + alpha_{k+1} q_{k+1} e_{k+1}^T
///
/// where B_k is (k+1) x k lower bidiagonal with diagonal alpha_1..alpha_k and
/// subdiagonal beta_2..beta_{k+1}.
struct BidiagFactors {
  Matrix P;        // m x (k+1)
  Matrix Q;        // n x k
  Vector alpha;    // alpha_1 .. alpha_k
  Vector beta;     // beta_2 .. beta_{k+1}
  Index k = 0;
  double b_norm = 0.0;

  /// alpha_{k+1} and q_{k+1} from one extra half step; zero when the
  /// process broke down.
  double alpha_next = 0.0;
  Vector q_next;

  bool terminated_early = false;
  // Also set when beta_{k+1} vanishes at the last requested step, e.g. at k = m.
  Index breakdown_step = 0;  // 1-based step j at which alpha_j or beta_{j+1} vanished

  /// Leading (j+1) x j block B_j, 1 <= j <= k.
  [[nodiscard]] Matrix B(Index j) const;
  [[nodiscard]] Matrix B() const { return B(k); }
};

struct BidiagOptions {
  Reorth reorth = Reorth::full;
  /// The process stops when alpha_j or beta_{j+1} <= breakdown_tol * ||A||.
  double breakdown_tol = 1e-13;
};

/// Runs up to kmax steps. With Reorth::full every new p and q vector is
/// orthogonalized twice by modified Gram-Schmidt against all stored vectors.
BidiagFactors bidiagonalize(const Matrix& a, const Vector& b, Index kmax,
                            const BidiagOptions& opts = {});

/// Singular values of B_k, descending (the Ritz values theta_1^{(k)} > ... > theta_k^{(k)}).
Vector ritz_values(const BidiagFactors& f, Index k);

/// Writes columns k, alpha, beta (alpha_k and beta_{k+1}) with a header line.
void write_entries_csv(std::ostream& out, const BidiagFactors& f);

/// Cheap spectral-norm estimate by power iteration on A^T A; used for
/// scale-relative thresholds only.
double estimate_two_norm(const Matrix& a, int iterations = 60);

}  // namespace ireg
