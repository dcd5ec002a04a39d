#pragma once

#include "ireg/bidiag.hpp"
#include "ireg/linalg.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ireg {

enum class Method { lsqr, cgls, tsvd, tikhonov, hybrid };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);

/// Iterates of one regularization method, indexed by position p = 1, 2, ...
/// For the Krylov methods and TSVD the parameter at position p is k = p; for
/// Tikhonov it is lambda; for the hybrid sweep it is the projected truncation j.
struct SolveTrace {
  Method method = Method::lsqr;
  std::vector<Vector> iterates;
  std::vector<double> residual_norms;  // ||A x - b||
  std::vector<double> solution_norms;  // ||x||
  std::vector<double> rel_errors;      // ||x - x_true|| / ||x_true||, empty without x_true
  std::vector<Vector> ritz;            // lsqr and hybrid only
  std::string param_name = "k";
  std::vector<double> params;

  [[nodiscard]] std::size_t size() const { return iterates.size(); }
};

struct LsqrOptions {
  Reorth reorth = Reorth::full;
  double breakdown_tol = 1e-13;
};

/// x^{(k)} = Q_k y^{(k)}, y^{(k)} = argmin ||B_k y - ||b|| e_1|| for k = 1..kmax
/// (fewer if the bidiagonalization terminates).
SolveTrace lsqr_run(const Matrix& a, const Vector& b, Index kmax, const LsqrOptions& opts = {},
                    const Vector* x_true = nullptr);

/// Same, reusing precomputed factors; k runs over 1..min(kmax, f.k).
SolveTrace lsqr_from_factors(const Matrix& a, const Vector& b, const BidiagFactors& f, Index kmax,
                             const Vector* x_true = nullptr);

/// LSQR coefficient vector y^{(k)} of the projected problem.
Vector lsqr_projected(const BidiagFactors& f, Index k);

/// Conjugate gradients on A^T A x = A^T b from x = 0, classical recurrences.
SolveTrace cgls_run(const Matrix& a, const Vector& b, Index kmax, const Vector* x_true = nullptr);

/// The k-th CGLS iterate; k = 0 gives the zero vector.
Vector cgls_solve(const Matrix& a, const Vector& b, Index k);

/// sum_{i<=k} (u_i^T b / sigma_i) v_i, 1 <= k <= n.
Vector tsvd_solve(const SvdFactors& svd, const Vector& b, Index k);
SolveTrace tsvd_run(const Matrix& a, const SvdFactors& svd, const Vector& b, Index kmax,
                    const Vector* x_true = nullptr);

/// sum f_i (u_i^T b / sigma_i) v_i with f_i = sigma_i^2 / (sigma_i^2 + lambda^2).
Vector tikhonov_solve(const SvdFactors& svd, const Vector& b, double lambda);
SolveTrace tikhonov_run(const Matrix& a, const SvdFactors& svd, const Vector& b,
                        const std::vector<double>& lambdas, const Vector* x_true = nullptr);

/// `count` logarithmically spaced values from sigma_n to sigma_1, ascending.
/// A zero sigma_n is replaced by eps_mach * sigma_1.
std::vector<double> tikhonov_grid(const Vector& sigma, int count = 40);

/// Q_k times the rank-j TSVD solution of min ||B_k y - b_norm e_1||.
Vector hybrid_solve(const BidiagFactors& f, double b_norm, Index k, Index j);

/// Hybrid solutions for j = 1..k at fixed k.
SolveTrace hybrid_run(const Matrix& a, const Vector& b, const BidiagFactors& f, Index k,
                      const Vector* x_true = nullptr);

/// f_i = 1 - prod_{j} (theta_j^2 - sigma_i^2) / theta_j^2 for every sigma_i.
Vector filter_factors(const Vector& theta, const Vector& sigma);

/// sum_i f_i (u_i^T b / sigma_i) v_i.
Vector reconstruct_from_filters(const SvdFactors& svd, const Vector& b, const Vector& f);

/// 1-based position of the smallest relative error; ties go to the earliest.
Index semi_convergence_index(const SolveTrace& trace);

/// Columns k, res_norm, sol_norm, rel_err, and the parameter column when it
/// differs from k.
void write_trace_csv(std::ostream& out, const SolveTrace& trace);

}  // namespace ireg
