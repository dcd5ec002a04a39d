#include "ireg/solvers.hpp"

#include "ireg/error.hpp"
#include "ireg/matrix_io.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace ireg {
namespace {

void push_iterate(SolveTrace& t, const Matrix& a, const Vector& b, Vector x, double param,
                  const Vector* x_true) {
  t.residual_norms.push_back((a * x - b).norm());
  t.solution_norms.push_back(x.norm());
  if (x_true != nullptr) t.rel_errors.push_back((x - *x_true).norm() / x_true->norm());
  t.params.push_back(param);
  t.iterates.push_back(std::move(x));
}

void check_rhs(const Matrix& a, const Vector& b, const Vector* x_true, const char* who) {
  if (b.size() != a.rows()) throw PreconditionError(std::string(who) + ": b has wrong length");
  if (!(b.norm() > 0.0)) throw PreconditionError(std::string(who) + ": b must be nonzero");
  if (x_true != nullptr) {
    if (x_true->size() != a.cols()) throw PreconditionError(std::string(who) + ": x_true has wrong length");
    if (!(x_true->norm() > 0.0)) throw PreconditionError(std::string(who) + ": x_true must be nonzero");
  }
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::lsqr: return "lsqr";
    case Method::cgls: return "cgls";
    case Method::tsvd: return "tsvd";
    case Method::tikhonov: return "tikhonov";
    case Method::hybrid: return "hybrid";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  for (auto m : {Method::lsqr, Method::cgls, Method::tsvd, Method::tikhonov, Method::hybrid}) {
    if (text == to_string(m)) return m;
  }
  throw PreconditionError("unknown solver '" + std::string(text) + "'");
}

Vector lsqr_projected(const BidiagFactors& f, Index k) {
  if (k < 1 || k > f.k) throw PreconditionError("lsqr_projected: k out of range");
  Vector rhs = Vector::Zero(k + 1);
  rhs(0) = f.b_norm;
  return lstsq_lower_bidiagonal(std::span<const double>(f.alpha.data(), static_cast<std::size_t>(k)),
                                std::span<const double>(f.beta.data(), static_cast<std::size_t>(k)), rhs);
}

SolveTrace lsqr_from_factors(const Matrix& a, const Vector& b, const BidiagFactors& f, Index kmax,
                             const Vector* x_true) {
  check_rhs(a, b, x_true, "lsqr");
  SolveTrace t;
  t.method = Method::lsqr;
  const Index kend = std::min(kmax, f.k);
  for (Index k = 1; k <= kend; ++k) {
    const Vector y = lsqr_projected(f, k);
    push_iterate(t, a, b, f.Q.leftCols(k) * y, static_cast<double>(k), x_true);
    t.ritz.push_back(ritz_values(f, k));
  }
  return t;
}

SolveTrace lsqr_run(const Matrix& a, const Vector& b, Index kmax, const LsqrOptions& opts,
                    const Vector* x_true) {
  check_rhs(a, b, x_true, "lsqr");
  const BidiagFactors f = bidiagonalize(a, b, kmax, {opts.reorth, opts.breakdown_tol});
  return lsqr_from_factors(a, b, f, kmax, x_true);
}

namespace {

// Runs CGLS for up to kmax steps, calling visit(k, x) after each one.
template <class Visit>
void cgls_iterate(const Matrix& a, const Vector& b, Index kmax, Visit&& visit) {
  Vector x = Vector::Zero(a.cols());
  Vector r = b;
  Vector s = a.transpose() * r;
  Vector p = s;
  double gamma = s.squaredNorm();
  for (Index k = 1; k <= kmax; ++k) {
    if (!(gamma > 0.0)) break;
    const Vector q = a * p;
    const double qq = q.squaredNorm();
    if (!(qq > 0.0)) break;
    const double step = gamma / qq;
    x += step * p;
    r -= step * q;
    s = a.transpose() * r;
    const double gamma_new = s.squaredNorm();
    p = s + (gamma_new / gamma) * p;
    gamma = gamma_new;
    visit(k, x);
  }
}

}  // namespace

SolveTrace cgls_run(const Matrix& a, const Vector& b, Index kmax, const Vector* x_true) {
  check_rhs(a, b, x_true, "cgls");
  if (kmax < 0) throw PreconditionError("cgls: kmax must be >= 0");
  SolveTrace t;
  t.method = Method::cgls;
  cgls_iterate(a, b, kmax, [&](Index k, const Vector& x) {
    push_iterate(t, a, b, x, static_cast<double>(k), x_true);
  });
  return t;
}

Vector cgls_solve(const Matrix& a, const Vector& b, Index k) {
  if (b.size() != a.rows()) throw PreconditionError("cgls: b has wrong length");
  if (k < 0) throw PreconditionError("cgls: k must be >= 0");
  Vector out = Vector::Zero(a.cols());
  cgls_iterate(a, b, k, [&](Index, const Vector& x) { out = x; });
  return out;
}

Vector tsvd_solve(const SvdFactors& svd, const Vector& b, Index k) {
  if (k < 1 || k > svd.sigma.size()) {
    throw PreconditionError("tsvd: k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(svd.sigma.size()) + "]");
  }
  Vector f = Vector::Zero(svd.sigma.size());
  f.head(k).setOnes();
  return reconstruct_from_filters(svd, b, f);
}

SolveTrace tsvd_run(const Matrix& a, const SvdFactors& svd, const Vector& b, Index kmax,
                    const Vector* x_true) {
  check_rhs(a, b, x_true, "tsvd");
  if (kmax < 1 || kmax > svd.sigma.size()) throw PreconditionError("tsvd: kmax out of range");
  const Vector c = svd.U.transpose() * b;
  SolveTrace t;
  t.method = Method::tsvd;
  Vector x = Vector::Zero(a.cols());
  for (Index k = 1; k <= kmax; ++k) {
    if (!(svd.sigma(k - 1) > 0.0)) throw NumericalError("tsvd: truncation index beyond the numerical rank");
    x += (c(k - 1) / svd.sigma(k - 1)) * svd.V.col(k - 1);
    push_iterate(t, a, b, x, static_cast<double>(k), x_true);
  }
  return t;
}

Vector tikhonov_solve(const SvdFactors& svd, const Vector& b, double lambda) {
  if (!(lambda >= 0.0)) throw PreconditionError("tikhonov: lambda must be >= 0");
  Vector f(svd.sigma.size());
  const double l2 = lambda * lambda;
  for (Index i = 0; i < f.size(); ++i) {
    const double s2 = svd.sigma(i) * svd.sigma(i);
    f(i) = s2 > 0.0 ? s2 / (s2 + l2) : (l2 > 0.0 ? 0.0 : 1.0);
  }
  return reconstruct_from_filters(svd, b, f);
}

SolveTrace tikhonov_run(const Matrix& a, const SvdFactors& svd, const Vector& b,
                        const std::vector<double>& lambdas, const Vector* x_true) {
  check_rhs(a, b, x_true, "tikhonov");
  SolveTrace t;
  t.method = Method::tikhonov;
  t.param_name = "lambda";
  for (double lambda : lambdas) push_iterate(t, a, b, tikhonov_solve(svd, b, lambda), lambda, x_true);
  return t;
}

std::vector<double> tikhonov_grid(const Vector& sigma, int count) {
  if (sigma.size() == 0 || !(sigma(0) > 0.0)) throw PreconditionError("tikhonov_grid: sigma_1 must be positive");
  if (count < 2) throw PreconditionError("tikhonov_grid: need at least 2 points");
  double lo = sigma(sigma.size() - 1);
  if (!(lo > 0.0)) lo = std::numeric_limits<double>::epsilon() * sigma(0);
  const double a = std::log(lo);
  const double b = std::log(sigma(0));
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  return grid;
}

Vector hybrid_solve(const BidiagFactors& f, double b_norm, Index k, Index j) {
  if (k < 1 || k > f.k || j < 1 || j > k) {
    throw PreconditionError("hybrid: need 1 <= j <= k <= f.k");
  }
  const SvdFactors s = svd(f.B(k));
  Vector y = Vector::Zero(k);
  for (Index i = 0; i < j; ++i) {
    if (!(s.sigma(i) > 0.0)) throw NumericalError("hybrid: zero Ritz value");
    y += (b_norm * s.U(0, i) / s.sigma(i)) * s.V.col(i);
  }
  return f.Q.leftCols(k) * y;
}

SolveTrace hybrid_run(const Matrix& a, const Vector& b, const BidiagFactors& f, Index k,
                      const Vector* x_true) {
  check_rhs(a, b, x_true, "hybrid");
  SolveTrace t;
  t.method = Method::hybrid;
  t.param_name = "j";
  const Vector theta = ritz_values(f, k);
  for (Index j = 1; j <= k; ++j) {
    push_iterate(t, a, b, hybrid_solve(f, f.b_norm, k, j), static_cast<double>(j), x_true);
    t.ritz.push_back(theta);
  }
  return t;
}

Vector filter_factors(const Vector& theta, const Vector& sigma) {
  for (Index j = 0; j < theta.size(); ++j) {
    if (!(theta(j) > 0.0)) throw PreconditionError("filter_factors: Ritz values must be positive");
    if (j > 0 && theta(j) > theta(j - 1)) throw PreconditionError("filter_factors: Ritz values must be descending");
  }
  Vector f(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    const double s2 = sigma(i) * sigma(i);
    bool all_positive = true;
    for (Index j = 0; j < theta.size(); ++j) all_positive = all_positive && s2 < theta(j) * theta(j);
    if (all_positive) {
      // 1 - prod(1 - x_j) without cancellation when every x_j is tiny.
      double log_prod = 0.0;
      for (Index j = 0; j < theta.size(); ++j) log_prod += std::log1p(-s2 / (theta(j) * theta(j)));
      f(i) = -std::expm1(log_prod);
    } else {
      double prod = 1.0;
      for (Index j = 0; j < theta.size(); ++j) prod *= (theta(j) * theta(j) - s2) / (theta(j) * theta(j));
      f(i) = 1.0 - prod;
    }
  }
  return f;
}

Vector reconstruct_from_filters(const SvdFactors& svd, const Vector& b, const Vector& f) {
  if (f.size() != svd.sigma.size()) throw PreconditionError("reconstruct_from_filters: f has wrong length");
  if (svd.U.rows() != b.size()) throw PreconditionError("reconstruct_from_filters: dimension mismatch");
  Vector c = svd.U.transpose() * b;
  for (Index i = 0; i < c.size(); ++i) {
    if (f(i) == 0.0) {
      c(i) = 0.0;  // also covers sigma_i = 0, where the filter vanishes like sigma_i^2
    } else if (!(svd.sigma(i) > 0.0)) {
      throw NumericalError("reconstruct_from_filters: nonzero filter on a zero singular value");
    } else {
      c(i) *= f(i) / svd.sigma(i);
    }
  }
  return svd.V.leftCols(c.size()) * c;
}

Index semi_convergence_index(const SolveTrace& trace) {
  if (trace.rel_errors.empty()) throw PreconditionError("semi_convergence_index: trace has no relative errors");
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.rel_errors.size(); ++i) {
    if (trace.rel_errors[i] < trace.rel_errors[best]) best = i;
  }
  return static_cast<Index>(best) + 1;
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  const bool extra = trace.param_name != "k";
  out << "k,res_norm,sol_norm,rel_err";
  if (extra) out << ',' << trace.param_name;
  out << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << (i + 1) << ',' << format_double(trace.residual_norms[i]) << ','
        << format_double(trace.solution_norms[i]) << ',';
    if (i < trace.rel_errors.size()) out << format_double(trace.rel_errors[i]);
    if (extra) out << ',' << format_double(trace.params[i]);
    out << '\n';
  }
  if (!out) throw IoError("trace CSV: write failed");
}

}  // namespace ireg
