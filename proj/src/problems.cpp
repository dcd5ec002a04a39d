#include "ireg/problems.hpp"

#include "ireg/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ireg {
namespace {

using std::numbers::pi;

Problem make_problem(ProblemName name, Index n, Matrix a, Vector x) {
  Problem p;
  p.name = name;
  p.n = n;
  p.b_hat = a * x;
  p.A = std::move(a);
  p.x_true = std::move(x);
  return p;
}

Problem shaw(Index n) {
  const double h = pi / static_cast<double>(n);
  Vector s(n);
  for (Index i = 0; i < n; ++i) s(i) = -pi / 2.0 + (static_cast<double>(i) + 0.5) * h;

  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double u = pi * (std::sin(s(i)) + std::sin(s(j)));
      const double sinc = (u == 0.0) ? 1.0 : std::sin(u) / u;
      const double c = std::cos(s(i)) + std::cos(s(j));
      a(i, j) = h * c * c * sinc * sinc;
    }
  }
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    const double t = s(i);
    x(i) = 2.0 * std::exp(-6.0 * (t - 0.8) * (t - 0.8)) + std::exp(-2.0 * (t + 0.5) * (t + 0.5));
  }
  return make_problem(ProblemName::shaw, n, std::move(a), std::move(x));
}

Problem wing(Index n) {
  const double h = 1.0 / static_cast<double>(n);
  Vector t(n);
  for (Index i = 0; i < n; ++i) t(i) = (static_cast<double>(i) + 0.5) * h;

  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = h * t(j) * std::exp(-t(i) * t(j) * t(j));
  }
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = (t(i) > 1.0 / 3.0 && t(i) < 2.0 / 3.0) ? 1.0 : 0.0;
  return make_problem(ProblemName::wing, n, std::move(a), std::move(x));
}

Problem heat(Index n) {
  constexpr double kappa = 1.0;
  const double h = 1.0 / static_cast<double>(n);
  const double c = 1.0 / (2.0 * kappa * std::sqrt(pi));
  const double d = 1.0 / (4.0 * kappa * kappa);

  // First column of the lower-triangular Toeplitz matrix.
  Vector col(n);
  for (Index i = 0; i < n; ++i) {
    const double tau = (static_cast<double>(i) + 0.5) * h;
    col(i) = h * c * std::pow(tau, -1.5) * std::exp(-d / tau);
  }
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) a(i, j) = col(i - j);
  }

  Vector x = Vector::Zero(n);
  for (Index i = 1; i <= n / 2; ++i) {
    const double ti = static_cast<double>(i) * 20.0 / static_cast<double>(n);
    double v = 0.0;
    if (ti < 2.0) {
      v = 0.75 * ti * ti / 4.0;
    } else if (ti < 3.0) {
      v = 0.75 + (ti - 2.0) * (3.0 - ti);
    } else {
      v = 0.75 * std::exp(-(ti - 3.0) * 2.0);
    }
    x(i - 1) = v;
  }
  return make_problem(ProblemName::heat, n, std::move(a), std::move(x));
}

Problem phillips(Index n) {
  const double h = 12.0 / static_cast<double>(n);
  Vector t(n);
  for (Index i = 0; i < n; ++i) t(i) = -6.0 + (static_cast<double>(i) + 0.5) * h;

  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double d = t(i) - t(j);
      a(i, j) = std::abs(d) < 3.0 ? h * (1.0 + std::cos(pi * d / 3.0)) : 0.0;
    }
  }
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = std::abs(t(i)) < 3.0 ? 1.0 + std::cos(pi * t(i) / 3.0) : 0.0;
  return make_problem(ProblemName::phillips, n, std::move(a), std::move(x));
}

Problem deriv2(Index n) {
  const double h = 1.0 / static_cast<double>(n);
  Vector t(n);
  for (Index i = 0; i < n; ++i) t(i) = (static_cast<double>(i) + 0.5) * h;

  // Green's function of u'' = f on [0,1] with zero boundary values.
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double s = t(i);
      const double tt = t(j);
      a(i, j) = h * (s <= tt ? s * (tt - 1.0) : tt * (s - 1.0));
    }
    a(i, i) += h * h / 6.0;
  }
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = t(i) < 0.5 ? t(i) : 1.0 - t(i);
  return make_problem(ProblemName::deriv2, n, std::move(a), std::move(x));
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms = 0.0;
};

LineFit fit_line(const Vector& x, const Vector& y) {
  const double mx = x.mean();
  const double my = y.mean();
  const Vector dx = x.array() - mx;
  const Vector dy = y.array() - my;
  const double sxx = dx.squaredNorm();
  LineFit f;
  f.slope = sxx > 0.0 ? dx.dot(dy) / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  const Vector r = dy - f.slope * dx;
  f.rms = std::sqrt(r.squaredNorm() / static_cast<double>(x.size()));
  return f;
}

}  // namespace

std::string_view to_string(ProblemName name) {
  switch (name) {
    case ProblemName::shaw: return "shaw";
    case ProblemName::wing: return "wing";
    case ProblemName::heat: return "heat";
    case ProblemName::phillips: return "phillips";
    case ProblemName::deriv2: return "deriv2";
  }
  return "unknown";
}

ProblemName parse_problem_name(std::string_view text) {
  for (auto p : {ProblemName::shaw, ProblemName::wing, ProblemName::heat, ProblemName::phillips,
                 ProblemName::deriv2}) {
    if (text == to_string(p)) return p;
  }
  throw PreconditionError("unknown problem name '" + std::string(text) + "'");
}

std::string_view to_string(DecayKind kind) {
  switch (kind) {
    case DecayKind::severe: return "severe";
    case DecayKind::moderate: return "moderate";
    case DecayKind::mild: return "mild";
  }
  return "unknown";
}

Problem generate(ProblemName name, Index n) {
  if (n < 8) throw PreconditionError("generate: n must be >= 8, got " + std::to_string(n));
  switch (name) {
    case ProblemName::shaw: return shaw(n);
    case ProblemName::wing: return wing(n);
    case ProblemName::heat: return heat(n);
    case ProblemName::phillips: return phillips(n);
    case ProblemName::deriv2: return deriv2(n);
  }
  throw PreconditionError("generate: unknown problem");
}

Problem generate(std::string_view name, Index n) { return generate(parse_problem_name(name), n); }

IllPosednessClass classify_decay(std::span<const double> s) {
  if (s.empty() || !(s[0] > 0.0)) {
    throw NumericalError("classify_decay: leading value must be positive");
  }
  const double floor = std::max(s[0] * 1e-13, std::numeric_limits<double>::min());
  Index usable = 0;
  for (double v : s) {
    if (!(v >= floor) || !std::isfinite(v)) break;
    ++usable;
  }
  if (usable < 8) {
    throw NumericalError("classify_decay: only " + std::to_string(usable) +
                         " usable values above the rounding floor (need 8)");
  }

  IllPosednessClass out;
  out.fit_range = {3, usable};
  const Index m = out.fit_range.size();
  Vector j(m), logj(m), logs(m);
  for (Index i = 0; i < m; ++i) {
    const Index idx = out.fit_range.first + i;
    j(i) = static_cast<double>(idx);
    logj(i) = std::log(static_cast<double>(idx));
    logs(i) = std::log(s[static_cast<std::size_t>(idx - 1)]);
  }
  const double spread = std::sqrt((logs.array() - logs.mean()).square().mean());
  const double scale = spread > 0.0 ? spread : 1.0;

  const LineFit e = fit_line(j, logs);
  const LineFit p = fit_line(logj, logs);
  out.exp_residual = e.rms / scale;
  out.power_residual = p.rms / scale;

  if (out.exp_residual < 0.9 * out.power_residual) {
    out.kind = DecayKind::severe;
    out.rho = std::exp(-e.slope);
    out.zeta = std::exp(e.intercept);
    out.fit_residual = out.exp_residual;
    if (!(*out.rho > 1.0)) throw NumericalError("classify_decay: sequence does not decay");
    return out;
  }
  const double alpha = -p.slope;
  out.alpha = alpha;
  out.zeta = std::exp(p.intercept);
  out.fit_residual = out.power_residual;
  if (alpha > 1.0) {
    out.kind = DecayKind::moderate;
  } else if (alpha > 0.5) {
    out.kind = DecayKind::mild;
  } else {
    throw PreconditionError("classify_decay: power-law exponent " + std::to_string(alpha) +
                            " <= 1/2 is outside the ill-posed classes");
  }
  return out;
}

IllPosednessClass classify_decay(const Vector& s) {
  return classify_decay(std::span<const double>(s.data(), static_cast<std::size_t>(s.size())));
}

double fit_picard_beta(const Vector& sigma, const Vector& coeffs, IndexRange range) {
  if (range.first < 1 || range.last > sigma.size() || range.last > coeffs.size() ||
      range.size() < 2) {
    throw PreconditionError("fit_picard_beta: invalid index range");
  }
  Vector x(range.size()), y(range.size());
  for (Index i = 0; i < range.size(); ++i) {
    const Index k = range.first - 1 + i;
    const double c = std::abs(coeffs(k));
    if (!(c > 0.0) || !(sigma(k) > 0.0)) {
      throw PreconditionError("fit_picard_beta: non-positive value at index " + std::to_string(k + 1));
    }
    x(i) = std::log(sigma(k));
    y(i) = std::log(c);
  }
  return fit_line(x, y).slope - 1.0;
}

double numerical_condition_number(const Vector& sigma) {
  if (sigma.size() == 0 || !(sigma(0) > 0.0)) {
    throw PreconditionError("numerical_condition_number: sigma_1 must be positive");
  }
  const double floor = std::numeric_limits<double>::epsilon() * sigma(0);
  return sigma(0) / std::max(sigma(sigma.size() - 1), floor);
}

}  // namespace ireg
