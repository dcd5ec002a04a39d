#include "ireg/noise.hpp"

#include "ireg/error.hpp"

#include <cmath>
#include <random>

namespace ireg {

NoisyProblem add_white_noise(const Problem& p, double eps, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw PreconditionError("add_white_noise: eps must lie in (0, 1)");
  }
  const double bnorm = p.b_hat.norm();
  if (!(bnorm > 0.0)) throw PreconditionError("add_white_noise: b_hat is zero");

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector e(p.b_hat.size());
  for (Index i = 0; i < e.size(); ++i) e(i) = normal(gen);
  e *= eps * bnorm / e.norm();

  NoisyProblem out;
  out.base = p;
  out.b = p.b_hat + e;
  out.eps = eps;
  out.seed = seed;
  out.eta = e.norm() / std::sqrt(static_cast<double>(e.size()));
  out.e = std::move(e);
  return out;
}

Index estimate_k0_from_coefficients(const Vector& coeffs, double eta, const K0Options& opts) {
  if (!(eta > 0.0)) throw PreconditionError("estimate_k0: eta must be positive");
  if (opts.max_gap < 0) throw PreconditionError("estimate_k0: max_gap must be >= 0");
  const double level = opts.threshold * eta;
  Index k0 = 0;
  Index run = 0;
  for (Index j = 0; j < coeffs.size(); ++j) {
    if (std::abs(coeffs(j)) >= level) {
      k0 = j + 1;
      run = 0;
    } else if (++run > opts.max_gap) {
      break;
    }
  }
  return k0;
}

Index estimate_k0(const SvdFactors& svd, const Vector& b, double eta, const K0Options& opts) {
  if (svd.U.rows() != b.size()) throw PreconditionError("estimate_k0: dimension mismatch");
  const Vector c = svd.U.transpose() * b;
  return estimate_k0_from_coefficients(c, eta, opts);
}

Index model_k0(double alpha, double beta, double eta) {
  if (!(alpha > 0.5) || !(beta >= 0.0) || !(eta > 0.0 && eta <= 1.0)) {
    throw PreconditionError("model_k0: requires alpha > 1/2, beta >= 0, 0 < eta <= 1");
  }
  const double v = std::pow(eta, -1.0 / (alpha * (1.0 + beta)));
  // Snap values that are integers up to rounding, e.g. (1e-4)^{-1/2} = 100.
  const double r = std::round(v);
  const double fl = std::abs(v - r) <= 1e-12 * v ? r : std::floor(v);
  const double k = fl - 1.0;
  return k > 0.0 ? static_cast<Index>(k) : 0;
}

}  // namespace ireg
