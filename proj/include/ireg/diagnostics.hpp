#pragma once

#include "ireg/bidiag.hpp"
#include "ireg/linalg.hpp"
#include "ireg/problems.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ireg {

/// Relative slack applied to strict inequalities: comparisons are made up to
/// kStrictSlack * sigma_1.
inline constexpr double kStrictSlack = 1e-12;

/// gamma_k = ||A (I - Q_k Q_k^T)|| for k = 1..kmax (kmax <= f.k; -1 means f.k).
Vector gamma_seq(const Matrix& a, const BidiagFactors& f, Index kmax = -1);

/// The same quantity through the factored form ||A - P_{k+1} B_k Q_k^T||.
Vector gamma_seq_factored(const Matrix& a, const BidiagFactors& f, Index kmax = -1);

/// flag_k = gamma_k < (sigma_k + sigma_{k+1}) / 2, k = 1..gamma.size().
std::vector<bool> near_best_flags(const Vector& gamma, const Vector& sigma);

/// Delta_k, (n-k) x k, from the Lagrange form
///   Delta_k(i, j) = sigma_{k+i} c_{k+i} / (sigma_j c_j) * L_j^{(k)}(sigma_{k+i}^2)
/// with c_i = u_i^T b, evaluated in log-magnitude arithmetic. Throws
/// NumericalError if some sigma_j |c_j| (j <= k) is below the underflow guard
/// or an entry overflows, PreconditionError for repeated sigma.
Matrix delta_matrix(const Vector& sigma, const Vector& coeffs, Index k);

inline constexpr double kDeltaUnderflowGuard = 1e-280;

struct SubspaceAngles {
  double sin = 0.0;
  double tan = 0.0;
};

/// Largest canonical angle between span(Q_k) and span(v_1..v_k).
/// sin = ||(V_k^perp)^T Q_k||; tan = sin / cos with cos = sigma_min(V_k^T Q_k),
/// which equals sqrt(1 - sin^2) but keeps accuracy when sin is close to one.
/// tan is +infinity when cos vanishes.
SubspaceAngles subspace_angles(const SvdFactors& svd, const BidiagFactors& f, Index k);

/// |L_j^{(k)}(0)| = prod_{i != j, i <= k} sigma_i^2 / |sigma_j^2 - sigma_i^2|, j = 1..k; k >= 2.
Vector lagrange_weights(const Vector& sigma, Index k);

/// sqrt((d / (1 + d^2))^2 + 1) for d < 1, sqrt(5)/2 otherwise.
double xi_factor(double delta_norm);

/// interlace_ok_k = (sigma_{i+1} < theta_i^{(k)} < sigma_i for all i <= k), up to
/// kStrictSlack * sigma_1, for k = 1..kmax. Requires kmax < n.
std::vector<bool> interlacing_report(const BidiagFactors& f, const Vector& sigma, Index kmax);

struct EntryDecayRecord {
  Index k = 0;
  double alpha_next = 0.0;   // alpha_{k+1}
  double beta_next2 = 0.0;   // beta_{k+2}
  bool alpha_below_gamma = false;
  bool beta_below_gamma = false;
  bool product_bound = false;  // alpha_{k+1} beta_{k+2} <= gamma_k^2 / 2
  bool gamma_decreasing = false;
  [[nodiscard]] bool ok() const {
    return alpha_below_gamma && beta_below_gamma && product_bound && gamma_decreasing;
  }
};

struct EntryDecayReport {
  std::vector<EntryDecayRecord> records;  // k = 1.. while alpha_{k+1}, beta_{k+2}, gamma_{k+1} exist
  std::optional<IllPosednessClass> entry_class;  // classify_decay on alpha_k + beta_{k+1}
  std::string classify_error;
  [[nodiscard]] bool all_ok() const;
};

/// sigma1 sets the slack scale.
EntryDecayReport entry_decay_report(const BidiagFactors& f, const Vector& gamma, double sigma1);

/// alpha_k + beta_{k+1}, k = 1..f.k.
Vector entry_sums(const BidiagFactors& f);

struct RayleighExtremal {
  Vector q;            // q~_k, unit vector in span(Q_k) closest to span(v_1..v_k)
  double rq = 0.0;     // q~^T A^T A q~
  double eps = 0.0;    // sqrt(1 - sin^2)
  double sin = 0.0;
  double lower = 0.0;  // eps^2 sigma_k^2 + (1 - eps^2) sigma_n^2
  double upper = 0.0;  // eps^2 sigma_1^2 + (1 - eps^2) sigma_{k+1}^2
};

RayleighExtremal rayleigh_extremal(const Matrix& a, const BidiagFactors& f, const SvdFactors& svd,
                                   Index k);

struct DiagnosticsRecord {
  Index k = 0;
  double gamma = 0.0;
  double sigma_next = 0.0;
  bool near_best = false;
  double sin_theta = 0.0;
  double tan_theta = 0.0;
  std::optional<double> delta_norm;
  std::optional<double> l_max;
  std::optional<double> xi;
  Vector theta;
  bool interlace_ok = false;
  std::optional<EntryDecayRecord> decay;
};

struct DiagnosticsReport {
  std::vector<DiagnosticsRecord> records;
  EntryDecayReport entry_decay;
};

/// Every per-k diagnostic for k = 1..min(kmax, f.k, n - 1).
DiagnosticsReport diagnose(const Matrix& a, const Vector& b, const BidiagFactors& f,
                           const SvdFactors& svd, Index kmax);

/// Columns k, gamma, sigma_next, near_best, sin_theta, tan_theta, delta_norm,
/// L_max, xi, theta_min, theta_max, interlace_ok, alpha_next, beta_next2,
/// decay_ok. Unavailable values are left empty.
void write_diagnostics_csv(std::ostream& out, const DiagnosticsReport& report);

}  // namespace ireg
