#include "ireg/diagnostics.hpp"

#include "ireg/error.hpp"
#include "ireg/matrix_io.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace ireg {
namespace {

Index resolve_kmax(const BidiagFactors& f, Index kmax) {
  if (kmax < 0) return f.k;
  if (kmax > f.k) throw PreconditionError("gamma_seq: kmax exceeds completed steps");
  return kmax;
}

// |a^2 - b^2| without squaring first.
double log_abs_diff_squares(double a, double b) { return std::log(std::abs(a - b)) + std::log(a + b); }

}  // namespace

Vector gamma_seq(const Matrix& a, const BidiagFactors& f, Index kmax) {
  kmax = resolve_kmax(f, kmax);
  const Matrix aq = a * f.Q.leftCols(kmax);
  Vector g(kmax);
  for (Index k = 1; k <= kmax; ++k) {
    g(k - 1) = two_norm(a - aq.leftCols(k) * f.Q.leftCols(k).transpose());
  }
  return g;
}

Vector gamma_seq_factored(const Matrix& a, const BidiagFactors& f, Index kmax) {
  kmax = resolve_kmax(f, kmax);
  Vector g(kmax);
  for (Index k = 1; k <= kmax; ++k) {
    g(k - 1) = two_norm(a - f.P.leftCols(k + 1) * f.B(k) * f.Q.leftCols(k).transpose());
  }
  return g;
}

std::vector<bool> near_best_flags(const Vector& gamma, const Vector& sigma) {
  if (sigma.size() < gamma.size() + 1) throw PreconditionError("near_best_flags: sigma too short");
  std::vector<bool> flags(static_cast<std::size_t>(gamma.size()));
  for (Index k = 0; k < gamma.size(); ++k) {
    flags[static_cast<std::size_t>(k)] = gamma(k) < 0.5 * (sigma(k) + sigma(k + 1));
  }
  return flags;
}

Matrix delta_matrix(const Vector& sigma, const Vector& coeffs, Index k) {
  const Index n = sigma.size();
  if (k < 1 || k >= n) throw PreconditionError("delta_matrix: need 1 <= k < n");
  if (coeffs.size() < n) throw PreconditionError("delta_matrix: coefficient vector too short");
  for (Index j = 0; j < k; ++j) {
    const double lead = sigma(j) * std::abs(coeffs(j));
    if (coeffs(j) == 0.0) {
      throw NumericalError("delta_matrix: coefficient u_" + std::to_string(j + 1) + "^T b is zero");
    }
    if (!(lead > kDeltaUnderflowGuard)) {
      throw NumericalError("delta_matrix: sigma_j |u_j^T b| below underflow guard at j=" +
                           std::to_string(j + 1));
    }
    for (Index l = 0; l < j; ++l) {
      if (sigma(l) == sigma(j)) throw PreconditionError("delta_matrix: singular values must be distinct");
    }
  }

  // Denominators of L_j: prod_{l != j} (sigma_j^2 - sigma_l^2), in log form with sign.
  Vector log_den = Vector::Zero(k);
  Vector sign_den = Vector::Ones(k);
  for (Index j = 0; j < k; ++j) {
    for (Index l = 0; l < k; ++l) {
      if (l == j) continue;
      log_den(j) += log_abs_diff_squares(sigma(j), sigma(l));
      if (sigma(j) < sigma(l)) sign_den(j) = -sign_den(j);
    }
    log_den(j) += std::log(sigma(j)) + std::log(std::abs(coeffs(j)));
    if (coeffs(j) < 0.0) sign_den(j) = -sign_den(j);
  }

  Matrix d = Matrix::Zero(n - k, k);
  for (Index i = 0; i < n - k; ++i) {
    const double s = sigma(k + i);
    const double c = coeffs(k + i);
    if (s == 0.0 || c == 0.0) continue;
    for (Index j = 0; j < k; ++j) {
      double log_num = std::log(s) + std::log(std::abs(c));
      double sign = c < 0.0 ? -1.0 : 1.0;
      bool zero = false;
      for (Index l = 0; l < k; ++l) {
        if (l == j) continue;
        if (s == sigma(l)) {
          zero = true;
          break;
        }
        log_num += log_abs_diff_squares(s, sigma(l));
        if (s < sigma(l)) sign = -sign;
      }
      if (zero) continue;
      const double log_mag = log_num - log_den(j);
      if (log_mag > std::log(std::numeric_limits<double>::max())) {
        throw NumericalError("delta_matrix: entry overflows at k=" + std::to_string(k));
      }
      d(i, j) = sign * sign_den(j) * std::exp(log_mag);
    }
  }
  return d;
}

SubspaceAngles subspace_angles(const SvdFactors& svd, const BidiagFactors& f, Index k) {
  if (k < 1 || k > f.k) throw PreconditionError("subspace_angles: k out of range");
  const Index n = svd.V.cols();
  if (f.Q.rows() != n) throw PreconditionError("subspace_angles: dimension mismatch");
  SubspaceAngles out;
  if (k >= n) return out;
  const Matrix qk = f.Q.leftCols(k);
  out.sin = std::min(1.0, two_norm(svd.V.rightCols(n - k).transpose() * qk));
  const Vector cosines = singular_values(svd.V.leftCols(k).transpose() * qk);
  const double cos_min = cosines(cosines.size() - 1);
  out.tan = cos_min > 0.0 ? out.sin / cos_min : std::numeric_limits<double>::infinity();
  return out;
}

Vector lagrange_weights(const Vector& sigma, Index k) {
  if (k < 2) throw PreconditionError("lagrange_weights: requires k >= 2");
  if (k > sigma.size()) throw PreconditionError("lagrange_weights: k exceeds number of singular values");
  Vector w(k);
  for (Index j = 0; j < k; ++j) {
    double lw = 0.0;
    for (Index i = 0; i < k; ++i) {
      if (i == j) continue;
      if (sigma(i) == sigma(j)) throw PreconditionError("lagrange_weights: singular values must be distinct");
      lw += 2.0 * std::log(sigma(i)) - log_abs_diff_squares(sigma(j), sigma(i));
    }
    w(j) = std::exp(lw);
  }
  return w;
}

double xi_factor(double delta_norm) {
  if (!(delta_norm >= 0.0)) throw PreconditionError("xi_factor: norm must be >= 0");
  if (delta_norm >= 1.0) return std::sqrt(5.0) / 2.0;
  const double r = delta_norm / (1.0 + delta_norm * delta_norm);
  return std::sqrt(r * r + 1.0);
}

std::vector<bool> interlacing_report(const BidiagFactors& f, const Vector& sigma, Index kmax) {
  if (kmax > f.k) throw PreconditionError("interlacing_report: kmax exceeds completed steps");
  if (kmax >= sigma.size()) throw PreconditionError("interlacing_report: requires k < n");
  const double slack = kStrictSlack * sigma(0);
  std::vector<bool> flags;
  for (Index k = 1; k <= kmax; ++k) {
    const Vector theta = ritz_values(f, k);
    bool ok = true;
    for (Index i = 0; i < k; ++i) {
      ok = ok && theta(i) > sigma(i + 1) - slack && theta(i) < sigma(i) + slack;
    }
    flags.push_back(ok);
  }
  return flags;
}

bool EntryDecayReport::all_ok() const {
  for (const auto& r : records) {
    if (!r.ok()) return false;
  }
  return true;
}

Vector entry_sums(const BidiagFactors& f) { return f.alpha + f.beta; }

EntryDecayReport entry_decay_report(const BidiagFactors& f, const Vector& gamma, double sigma1) {
  const double slack = kStrictSlack * sigma1;
  EntryDecayReport rep;
  const Index kend = std::min(f.k - 1, gamma.size() - 1);
  for (Index k = 1; k <= kend; ++k) {
    EntryDecayRecord r;
    r.k = k;
    r.alpha_next = f.alpha(k);
    r.beta_next2 = f.beta(k);
    const double g = gamma(k - 1);
    r.alpha_below_gamma = r.alpha_next < g + slack;
    r.beta_below_gamma = r.beta_next2 < g + slack;
    r.product_bound = r.alpha_next * r.beta_next2 <= 0.5 * g * g + slack * sigma1;
    r.gamma_decreasing = gamma(k) < g + slack;
    rep.records.push_back(r);
  }
  try {
    rep.entry_class = classify_decay(entry_sums(f));
  } catch (const Error& e) {
    rep.classify_error = e.what();
  }
  return rep;
}

RayleighExtremal rayleigh_extremal(const Matrix& a, const BidiagFactors& f, const SvdFactors& svd,
                                   Index k) {
  const Index n = svd.V.cols();
  if (k < 1 || k > f.k || k >= n) throw PreconditionError("rayleigh_extremal: need 1 <= k < n, k <= f.k");
  const Matrix qk = f.Q.leftCols(k);
  const SvdFactors m = ireg::svd(svd.V.rightCols(n - k).transpose() * qk);
  RayleighExtremal out;
  out.q = qk * m.V.col(0);
  out.rq = (a * out.q).squaredNorm();
  out.sin = std::min(1.0, m.sigma(0));
  const double eps2 = 1.0 - out.sin * out.sin;
  out.eps = std::sqrt(eps2);
  const Vector& s = svd.sigma;
  out.lower = eps2 * s(k - 1) * s(k - 1) + (1.0 - eps2) * s(n - 1) * s(n - 1);
  out.upper = eps2 * s(0) * s(0) + (1.0 - eps2) * s(k) * s(k);
  return out;
}

DiagnosticsReport diagnose(const Matrix& a, const Vector& b, const BidiagFactors& f,
                           const SvdFactors& svd, Index kmax) {
  const Index n = svd.sigma.size();
  const Index kend = std::min({kmax, f.k, n - 1});
  if (kend < 1) throw PreconditionError("diagnose: nothing to report");
  const Vector& sigma = svd.sigma;
  const Vector coeffs = svd.U.transpose() * b;

  // gamma_{k+1} is needed for the decay check at k.
  const Vector gamma = gamma_seq(a, f, std::min(kend + 1, f.k));
  const std::vector<bool> near = near_best_flags(gamma.head(kend), sigma);
  const std::vector<bool> inter = interlacing_report(f, sigma, kend);

  DiagnosticsReport rep;
  rep.entry_decay = entry_decay_report(f, gamma, sigma(0));
  for (Index k = 1; k <= kend; ++k) {
    DiagnosticsRecord r;
    r.k = k;
    r.gamma = gamma(k - 1);
    r.sigma_next = sigma(k);
    r.near_best = near[static_cast<std::size_t>(k - 1)];
    const SubspaceAngles ang = subspace_angles(svd, f, k);
    r.sin_theta = ang.sin;
    r.tan_theta = ang.tan;
    try {
      const double dn = two_norm(delta_matrix(sigma, coeffs, k));
      r.delta_norm = dn;
      r.xi = xi_factor(dn);
    } catch (const Error&) {
      // Delta_k is not representable here; the factor-based angles still are.
    }
    if (k >= 2) {
      try {
        r.l_max = lagrange_weights(sigma, k).maxCoeff();
      } catch (const Error&) {
      }
    }
    r.theta = ritz_values(f, k);
    r.interlace_ok = inter[static_cast<std::size_t>(k - 1)];
    for (const auto& d : rep.entry_decay.records) {
      if (d.k == k) r.decay = d;
    }
    rep.records.push_back(std::move(r));
  }
  return rep;
}

void write_diagnostics_csv(std::ostream& out, const DiagnosticsReport& report) {
  out << "k,gamma,sigma_next,near_best,sin_theta,tan_theta,delta_norm,L_max,xi,theta_min,theta_max,"
         "interlace_ok,alpha_next,beta_next2,decay_ok\n";
  auto opt = [&](const std::optional<double>& v) {
    if (v) out << format_double(*v);
  };
  for (const auto& r : report.records) {
    out << r.k << ',' << format_double(r.gamma) << ',' << format_double(r.sigma_next) << ','
        << (r.near_best ? 1 : 0) << ',' << format_double(r.sin_theta) << ','
        << format_double(r.tan_theta) << ',';
    opt(r.delta_norm);
    out << ',';
    opt(r.l_max);
    out << ',';
    opt(r.xi);
    out << ',' << format_double(r.theta.minCoeff()) << ',' << format_double(r.theta.maxCoeff()) << ','
        << (r.interlace_ok ? 1 : 0) << ',';
    if (r.decay) {
      out << format_double(r.decay->alpha_next) << ',' << format_double(r.decay->beta_next2) << ','
          << (r.decay->ok() ? 1 : 0);
    } else {
      out << ",,";
    }
    out << '\n';
  }
  if (!out) throw IoError("diagnostics CSV: write failed");
}

}  // namespace ireg
