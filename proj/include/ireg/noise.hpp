#pragma once

#include "ireg/linalg.hpp"
#include "ireg/problems.hpp"

#include <cstdint>

namespace ireg {

/// A test problem with white noise added to its right-hand side.
struct NoisyProblem {
  Problem base;
  Vector e;
  Vector b;              // b_hat + e
  double eps = 0.0;      // ||e|| / ||b_hat||
  std::uint64_t seed = 0;
  double eta = 0.0;      // ||e|| / sqrt(m)
};

/// Draws e with i.i.d. standard normal entries and rescales it so that
/// ||e|| = eps * ||b_hat||. Requires 0 < eps < 1.
///
/// Seed-to-stream mapping: std::mt19937_64 seeded with `seed`, sampled
/// through std::normal_distribution<double>(0, 1) as shipped with the
/// toolchain's standard library (libstdc++ for the reference build).
NoisyProblem add_white_noise(const Problem& p, double eps, std::uint64_t seed);

struct K0Options {
  /// A coefficient |u_j^T b| counts as signal when it is >= threshold * eta.
  double threshold = 2.0;
  /// Longest run of consecutive sub-threshold coefficients that is still
  /// bridged. 0 gives the strict prefix rule.
  Index max_gap = 1;
};

/// Transition index k0 from the Picard coefficients c_j = u_j^T b.
///
/// Scans j = 1, 2, ... and stops at the first run of more than
/// `max_gap` consecutive coefficients below threshold * eta; k0 is the last
/// above-threshold index before that run (0 if none). Monotone
/// non-increasing in eta.
Index estimate_k0_from_coefficients(const Vector& coeffs, double eta, const K0Options& opts = {});
Index estimate_k0(const SvdFactors& svd, const Vector& b, double eta, const K0Options& opts = {});

/// floor(eta^{-1/(alpha(1+beta))}) - 1, clamped to >= 0.
Index model_k0(double alpha, double beta, double eta);

}  // namespace ireg
