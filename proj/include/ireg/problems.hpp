#pragma once

#include "ireg/linalg.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace ireg {

enum class ProblemName { shaw, wing, heat, phillips, deriv2 };

std::string_view to_string(ProblemName name);

/// Accepts exactly "shaw", "wing", "heat", "phillips", "deriv2".
ProblemName parse_problem_name(std::string_view text);

/// An exact test instance A x_true = b_hat from a discretized first-kind
/// integral equation.
struct Problem {
  ProblemName name;
  Index n = 0;
  Matrix A;
  Vector x_true;
  Vector b_hat;
};

/// Builds the named test problem of order n (n >= 8). Deterministic.
///
/// All kernels are discretized with n midpoint nodes and uniform weight
/// h = (interval length)/n, i.e. A_ij = h k(s_i, t_j), with two exceptions
/// that follow the Regularization Tools constructions: heat evaluates its
/// Volterra kernel at the staggered arguments (i - j + 1/2) h, and deriv2
/// adds the exact cell integral h^2/6 of the Green's function kink to the
/// diagonal. b_hat = A x_true in every case.
Problem generate(ProblemName name, Index n);
Problem generate(std::string_view name, Index n);

/// 1-based inclusive index interval.
struct IndexRange {
  Index first = 1;
  Index last = 1;
  [[nodiscard]] Index size() const { return last - first + 1; }
};

enum class DecayKind { severe, moderate, mild };

std::string_view to_string(DecayKind kind);

/// Degree of ill-posedness fitted from a decaying sequence.
///
/// severe:   s_j = zeta * rho^{-j},   rho > 1
/// moderate: s_j = zeta * j^{-alpha}, alpha > 1
/// mild:     s_j = zeta * j^{-alpha}, 1/2 < alpha <= 1
struct IllPosednessClass {
  DecayKind kind = DecayKind::severe;
  std::optional<double> rho;
  std::optional<double> alpha;
  double zeta = 0.0;
  IndexRange fit_range;
  double fit_residual = 0.0;
  // Normalized residuals of both candidate models, kept for reporting.
  double exp_residual = 0.0;
  double power_residual = 0.0;
};

/// Fits log s_j against j (exponential model) and against log j (power model)
/// by least squares and picks the better one. Entries below
/// max(1e-13 * s_1, DBL_MIN) and everything after the first such entry are
/// discarded; the fit starts at j = 3. The exponential model wins only if its
/// normalized residual is below 0.9 times the power model's.
///
/// Throws NumericalError when fewer than 8 usable entries remain and
/// PreconditionError when the power fit gives alpha <= 1/2.
IllPosednessClass classify_decay(std::span<const double> s);
IllPosednessClass classify_decay(const Vector& s);

/// Discrete Picard exponent: least-squares slope of log|c_i| against
/// log sigma_i over `range`, minus one.
double fit_picard_beta(const Vector& sigma, const Vector& coeffs, IndexRange range);

/// sigma_1 / max(sigma_n, eps_mach * sigma_1): the ratio with sigma_n floored
/// at the level where computed singular values are pure rounding.
double numerical_condition_number(const Vector& sigma);

}  // namespace ireg
