#include "ireg/diagnostics.hpp"
#include "ireg/error.hpp"
#include "ireg/noise.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace ireg;
using ireg::test::Rng;

namespace {

Matrix diag_of(std::initializer_list<double> d) {
  Vector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

// Largest principal-angle sine between the column spaces of two full-rank matrices.
double span_distance(const Matrix& x, const Matrix& y) {
  const Matrix qx = Eigen::HouseholderQR<Matrix>(x).householderQ() * Matrix::Identity(x.rows(), x.cols());
  const Matrix qy = Eigen::HouseholderQR<Matrix>(y).householderQ() * Matrix::Identity(y.rows(), y.cols());
  return two_norm(qy - qx * (qx.transpose() * qy));
}

}  // namespace

TEST(Gamma, HandExample) {
  const Matrix a = diag_of({2, 1});
  const BidiagFactors f = bidiagonalize(a, Vector::Ones(2), 1);
  const Vector g = gamma_seq(a, f);
  ASSERT_EQ(g.size(), 1);
  EXPECT_NEAR(g(0), std::sqrt(40.0) / 5.0, 1e-14);
  EXPECT_GE(g(0), 1.0);
  EXPECT_NEAR(gamma_seq_factored(a, f)(0), g(0), 1e-14);
}

TEST(Gamma, RankOneIsCapturedExactly) {
  Rng rng(1);
  const Vector u = ireg::test::gaussian_vector(5, rng).normalized();
  const Vector v = ireg::test::gaussian_vector(5, rng).normalized();
  const Matrix a = 2.0 * u * v.transpose();
  const BidiagFactors f = bidiagonalize(a, ireg::test::gaussian_vector(5, rng), 3);
  EXPECT_NEAR(gamma_seq(a, f)(0), 0.0, 1e-14);
}

TEST(GammaProperty, BoundsAndAgreement) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 20 + static_cast<Index>(rng() % 20);
    const Vector s = ireg::test::geometric(n, ireg::test::uniform(rng, 0.5, 0.9));
    const Matrix a = ireg::test::with_singular_values(s, n, rng);
    const BidiagFactors f = bidiagonalize(a, ireg::test::gaussian_vector(n, rng), 15);
    const Vector g = gamma_seq(a, f);
    const Vector gf = gamma_seq_factored(a, f);
    for (Index k = 1; k <= g.size(); ++k) {
      EXPECT_NEAR(g(k - 1), gf(k - 1), 1e-10);
      EXPECT_GE(g(k - 1), s(k) * (1 - 1e-12));
      if (k > 1) EXPECT_LE(g(k - 1), g(k - 2) * (1 + 1e-12));
    }
  }
}

TEST(Gamma, ShawNearOptimalBeforeTransition) {
  const NoisyProblem np = add_white_noise(generate(ProblemName::shaw, 256), 1e-3, 1);
  const SvdFactors s = svd(np.base.A);
  const Index k0 = estimate_k0(s, np.b, np.eta);
  const BidiagFactors f = bidiagonalize(np.base.A, np.b, k0);
  const Vector g = gamma_seq(np.base.A, f);
  for (Index k = 1; k <= k0; ++k) {
    EXPECT_GE(g(k - 1), s.sigma(k) * (1 - 1e-10)) << "k " << k;
    EXPECT_LE(g(k - 1), 2.0 * s.sigma(k)) << "k " << k;
  }
}

TEST(NearBest, Examples) {
  const Vector sigma = Eigen::Vector2d(2, 1);
  EXPECT_TRUE(near_best_flags(Vector::Constant(1, 1.1), sigma)[0]);
  EXPECT_FALSE(near_best_flags(Vector::Constant(1, 1.6), sigma)[0]);
}

TEST(DeltaMatrix, HandExample) {
  const Vector sigma = Eigen::Vector3d(0.5, 0.25, 0.125);
  const Matrix d = delta_matrix(sigma, Vector::Ones(3), 1);
  ASSERT_EQ(d.rows(), 2);
  ASSERT_EQ(d.cols(), 1);
  EXPECT_NEAR(d(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(d(1, 0), 0.25, 1e-15);
  EXPECT_NEAR(two_norm(d), std::sqrt(5.0) / 4.0, 1e-15);
}

TEST(DeltaMatrix, VanishesWhenRightHandSideIsCaptured) {
  const Vector sigma = Eigen::Vector4d(1, 0.5, 0.2, 0.1);
  const Vector c = Eigen::Vector4d(1, -2, 0, 0);
  EXPECT_EQ(delta_matrix(sigma, c, 2).norm(), 0.0);
}

TEST(DeltaMatrix, Errors) {
  const Vector sigma = Eigen::Vector3d(0.5, 0.25, 0.125);
  EXPECT_THROW(delta_matrix(sigma, Vector(Eigen::Vector3d(0, 1, 1)), 1), NumericalError);
  EXPECT_THROW(delta_matrix(Vector(Eigen::Vector3d(0.5, 0.5, 0.1)), Vector::Ones(3), 2), PreconditionError);
  EXPECT_THROW(delta_matrix(sigma, Vector::Ones(3), 3), PreconditionError);
  EXPECT_THROW(delta_matrix(sigma, Vector::Ones(3), 0), PreconditionError);
}

TEST(DeltaMatrixProperty, SpansTheKrylovSubspace) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 4;
    const Index k = 2;
    const Vector s = Eigen::Vector4d(1.0, ireg::test::uniform(rng, 0.6, 0.8), ireg::test::uniform(rng, 0.3, 0.5),
                                     ireg::test::uniform(rng, 0.05, 0.2));
    const Matrix a = ireg::test::with_singular_values(s, n, rng);
    const Vector b = ireg::test::gaussian_vector(n, rng);
    const SvdFactors f = svd(a);
    const Matrix d = delta_matrix(f.sigma, f.U.transpose() * b, k);
    Matrix stacked(n, k);
    stacked << Matrix::Identity(k, k), d;
    const Matrix basis = f.V * stacked;
    Matrix krylov(n, k);
    krylov.col(0) = a.transpose() * b;
    krylov.col(1) = a.transpose() * (a * krylov.col(0));
    EXPECT_LE(span_distance(krylov, basis), 1e-8);
  }
}

TEST(SubspaceAngles, HandExample) {
  const Matrix a = diag_of({0.5, 0.25, 0.125});
  const SvdFactors s = svd(a);
  const BidiagFactors f = bidiagonalize(a, Vector::Ones(3), 2);
  const SubspaceAngles ang = subspace_angles(s, f, 1);
  EXPECT_NEAR(ang.sin, std::sqrt(5.0 / 21.0), 1e-14);
  EXPECT_NEAR(ang.sin, 0.48795, 1e-5);
  EXPECT_NEAR(ang.tan, std::sqrt(5.0) / 4.0, 1e-14);
}

TEST(SubspaceAngles, ZeroWhenRightHandSideIsCaptured) {
  const Matrix a = diag_of({1.0, 0.5, 0.25, 0.1});
  const SvdFactors s = svd(a);
  const BidiagFactors f = bidiagonalize(a, Vector(Eigen::Vector4d(1, 1, 0, 0)), 2);
  ASSERT_EQ(f.k, 2);
  EXPECT_NEAR(subspace_angles(s, f, 2).sin, 0.0, 1e-14);
}

TEST(SubspaceAnglesProperty, AgreesWithDeltaNorm) {
  Rng rng(4);
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = 12;
    const Matrix a = ireg::test::with_singular_values(ireg::test::geometric(n, 0.6), n, rng);
    const Vector b = ireg::test::gaussian_vector(n, rng);
    const SvdFactors s = svd(a);
    const BidiagFactors f = bidiagonalize(a, b, 5);
    for (Index k = 1; k <= 5; ++k) {
      const double dn = two_norm(delta_matrix(s.sigma, s.U.transpose() * b, k));
      const SubspaceAngles ang = subspace_angles(s, f, k);
      EXPECT_NEAR(ang.sin, dn / std::sqrt(1 + dn * dn), 1e-8);
      EXPECT_NEAR(ang.tan, dn, 1e-8 * std::max(1.0, dn));
    }
  }
}

TEST(SubspaceAngles, Deriv2ApproachesOrthogonality) {
  const NoisyProblem np = add_white_noise(generate(ProblemName::deriv2, 256), 1e-3, 1);
  const SvdFactors s = svd(np.base.A);
  const Index k0 = estimate_k0(s, np.b, np.eta);
  const BidiagFactors f = bidiagonalize(np.base.A, np.b, k0);
  EXPECT_GT(subspace_angles(s, f, k0).sin, 0.9);
}

TEST(LagrangeWeights, HandExample) {
  const Vector w = lagrange_weights(Vector(Eigen::Vector2d(0.5, 0.25)), 2);
  EXPECT_NEAR(w(0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(w(1), 4.0 / 3.0, 1e-15);
  EXPECT_THROW(lagrange_weights(Vector(Eigen::Vector2d(0.5, 0.25)), 1), PreconditionError);
}

TEST(LagrangeWeights, SevereDecayIsNearOne) {
  Vector sigma(5);
  for (Index j = 0; j < 5; ++j) sigma(j) = std::pow(10.0, -(j + 1.0));
  const double m = lagrange_weights(sigma, 5).maxCoeff();
  EXPECT_GE(m, 1.0);
  EXPECT_LE(m, 1.05);
}

TEST(LagrangeWeights, ModerateDecayApproximation) {
  Vector sigma(10);
  for (Index j = 0; j < 10; ++j) sigma(j) = std::pow(j + 1.0, -2.0);
  const double m = lagrange_weights(sigma, 10).maxCoeff();
  EXPECT_NEAR(m, 3.0, 0.9);
}

TEST(XiFactor, Examples) {
  EXPECT_DOUBLE_EQ(xi_factor(0.0), 1.0);
  EXPECT_NEAR(xi_factor(1.0), std::sqrt(5.0) / 2.0, 1e-15);
  EXPECT_NEAR(xi_factor(7.0), std::sqrt(5.0) / 2.0, 1e-15);
  EXPECT_NEAR(xi_factor(0.5), std::sqrt(1.16), 1e-15);
}

TEST(Interlacing, RandomSevereProblemInterlaces) {
  Rng rng(5);
  const Index n = 20;
  const Vector s = ireg::test::geometric(n, 0.3);
  const Matrix a = ireg::test::with_singular_values(s, n, rng);
  const BidiagFactors f = bidiagonalize(a, ireg::test::gaussian_vector(n, rng), 5);
  for (bool ok : interlacing_report(f, s, 5)) EXPECT_TRUE(ok);
  EXPECT_THROW(interlacing_report(f, s, 6), PreconditionError);
}

TEST(Interlacing, ShawBeforeTransition) {
  const NoisyProblem np = add_white_noise(generate(ProblemName::shaw, 256), 1e-3, 1);
  const SvdFactors s = svd(np.base.A);
  const Index k0 = estimate_k0(s, np.b, np.eta);
  const BidiagFactors f = bidiagonalize(np.base.A, np.b, k0);
  const std::vector<bool> flags = interlacing_report(f, s.sigma, k0);
  for (Index k = 1; k <= k0; ++k) EXPECT_TRUE(flags[static_cast<std::size_t>(k - 1)]) << "k " << k;
}

TEST(EntryDecay, BoundsHoldOnGeneratedProblem) {
  const NoisyProblem np = add_white_noise(generate(ProblemName::shaw, 256), 1e-3, 1);
  const SvdFactors s = svd(np.base.A);
  const BidiagFactors f = bidiagonalize(np.base.A, np.b, 12);
  const Vector g = gamma_seq(np.base.A, f);
  const EntryDecayReport r = entry_decay_report(f, g, s.sigma(0));
  EXPECT_FALSE(r.records.empty());
  EXPECT_TRUE(r.all_ok());
  const Vector sums = entry_sums(f);
  EXPECT_NEAR(sums(0), f.alpha(0) + f.beta(0), 1e-15);
}

TEST(Rayleigh, HandExample) {
  const Matrix a = diag_of({2, 1});
  const BidiagFactors f = bidiagonalize(a, Vector::Ones(2), 1);
  const RayleighExtremal r = rayleigh_extremal(a, f, svd(a), 1);
  EXPECT_NEAR(r.rq, 3.4, 1e-14);
  EXPECT_NEAR(r.eps * r.eps, 0.8, 1e-14);
  EXPECT_NEAR(r.upper, 3.4, 1e-14);
  EXPECT_NEAR(r.lower, 3.4, 1e-14);
}

TEST(RayleighProperty, BoundsAndRitzComparison) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 15;
    const Vector s = ireg::test::geometric(n, ireg::test::uniform(rng, 0.3, 0.8));
    const Matrix a = ireg::test::with_singular_values(s, n, rng);
    const SvdFactors sv = svd(a);
    const BidiagFactors f = bidiagonalize(a, ireg::test::gaussian_vector(n, rng), 6);
    for (Index k = 1; k <= 6; ++k) {
      const RayleighExtremal r = rayleigh_extremal(a, f, sv, k);
      EXPECT_NEAR(r.q.norm(), 1.0, 1e-12);
      EXPECT_LE(r.lower, r.rq * (1 + 1e-10));
      EXPECT_LE(r.rq, r.upper * (1 + 1e-10));
      EXPECT_LE(ritz_values(f, k)(k - 1), std::sqrt(r.rq) + 1e-10);
    }
  }
}

TEST(Diagnose, CsvColumns) {
  const NoisyProblem np = add_white_noise(generate(ProblemName::shaw, 64), 1e-3, 1);
  const SvdFactors s = svd(np.base.A);
  const BidiagFactors f = bidiagonalize(np.base.A, np.b, 8);
  const DiagnosticsReport rep = diagnose(np.base.A, np.b, f, s, 6);
  EXPECT_EQ(rep.records.size(), 6u);
  std::ostringstream out;
  write_diagnostics_csv(out, rep);
  const std::string header = out.str().substr(0, out.str().find('\n'));
  EXPECT_EQ(header,
            "k,gamma,sigma_next,near_best,sin_theta,tan_theta,delta_norm,L_max,xi,theta_min,theta_max,"
            "interlace_ok,alpha_next,beta_next2,decay_ok");
  std::size_t lines = 0;
  for (char c : out.str()) lines += c == '\n';
  EXPECT_EQ(lines, 7u);
}
