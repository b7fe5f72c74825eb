#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tpb/colehopf.hpp"
#include "tpb/errors.hpp"
#include "tpb/norms.hpp"
#include "tpb/operators.hpp"

namespace {

using tpb::Basis;
using tpb::ColeHopfElement;
using tpb::Complex;
using tpb::SetKind;
using tpb::SpectralField;
using tpb::oracle::kPi;
using tpb::oracle::kSqrt2;

constexpr double kNoCheck = std::numeric_limits<double>::infinity();

// Low-mode cosine potential with |W| <= 2 mu amp, embedded in an n x n truncation.
SpectralField smooth_potential(std::uint64_t seed, int n, double mu, double amp) {
  SpectralField W = tpb::random_field(seed, 2, 2, 1.0, Basis::NeumannCosine);
  W(0, 0) = 0.0;
  W *= amp * 2 * mu / tpb::to_grid(W, 10, 7).values.cwiseAbs().maxCoeff();
  return tpb::resized(W, n, n);
}

SpectralField smooth_advection(std::uint64_t seed, int n, double amp) {
  SpectralField v = tpb::random_field(seed, 2, 3, 1.0);
  v *= amp / tpb::to_grid(v, 10, 9).values.cwiseAbs().maxCoeff();
  return tpb::resized(v, n, n);
}

ColeHopfElement s2(const SpectralField& W, const SpectralField& v, double K) {
  ColeHopfElement e;
  e.kind = SetKind::S2;
  e.W = W;
  e.v = v;
  e.K = K;
  return e;
}

TEST(Antiderivative, FirstSineMode) {
  SpectralField w(1, 3);
  w.set_mode(0, 1, 1.0);
  const SpectralField W = tpb::antiderivative_x(w);
  EXPECT_EQ(W.basis(), Basis::NeumannCosine);
  // sqrt2 (1 - cos pi x) / pi
  EXPECT_NEAR(W(0, 0).real(), kSqrt2 / kPi, 1e-15);
  EXPECT_NEAR(W(0, 1).real(), -1.0 / kPi, 1e-15);
  for (double x : {0.0, 0.25, 0.9})
    EXPECT_NEAR(tpb::oracle::eval(W, 0.3, x), kSqrt2 * (1 - std::cos(kPi * x)) / kPi, 1e-14);
}

TEST(Antiderivative, ZeroAndRoundTrip) {
  EXPECT_EQ(tpb::antiderivative_x(SpectralField(2, 2)).max_abs(), 0.0);
  const SpectralField w = tpb::random_field(3, 6, 6, 1.0);
  const SpectralField back = tpb::d_x(tpb::antiderivative_x(w));
  EXPECT_LE(tpb::l2_norm(back - w), 1e-12 * tpb::l2_norm(w));
  const SpectralField W = tpb::antiderivative_x(w);
  for (double t : {0.0, 0.4}) EXPECT_NEAR(tpb::oracle::eval(W, t, 0.0), 0.0, 1e-13);
}

TEST(Lift, ZeroDifference) {
  const SpectralField v = smooth_advection(2, 6, 1.0);
  const ColeHopfElement e = tpb::lift_s1_to_s2(SpectralField(6, 6), v, 0.5);
  EXPECT_EQ(e.kind, SetKind::S2);
  EXPECT_EQ(e.W.max_abs(), 0.0);
  EXPECT_EQ(e.K, 0.0);
}

TEST(Lift, DifferenceOfTwoSolutions) {
  tpb::SolverConfig cfg;
  cfg.mu = 0.5;
  SpectralField f(8, 8);
  f.set_mode(0, 1, 1.0);
  f.set_mode(1, 2, Complex(0.3, 0.2));
  const tpb::SolveReport a = tpb::newton_solve(f, SpectralField(8, 8), cfg);
  const tpb::SolveReport b = tpb::newton_solve(f, 0.1 * tpb::random_field(9, 8, 8, 2.0), cfg);
  ASSERT_TRUE(a.converged && b.converged);
  const ColeHopfElement e = tpb::lift_s1_to_s2(a.u - b.u, b.u, cfg.mu);
  EXPECT_LE(std::abs(e.K), 1e-8);
  EXPECT_LE(tpb::l2_norm(e.W), 1e-8);
}

TEST(Lift, RejectsNonMember) {
  const SpectralField v = smooth_advection(4, 6, 1.0);
  const SpectralField w = tpb::random_field(5, 6, 6, 1.0);
  EXPECT_THROW(tpb::lift_s1_to_s2(w, v, 0.5), tpb::NotInS1Error);
}

TEST(Lift, DifferentiatedPotentialEquationIsS1Residual) {
  const double mu = 0.3;
  const SpectralField W0 = smooth_potential(6, 8, mu, 0.5);
  const SpectralField v = smooth_advection(7, 8, 1.0);
  const SpectralField w = tpb::d_x(W0);
  const SpectralField Wbar = tpb::antiderivative_x(w);
  const SpectralField lhs = tpb::d_x(tpb::s2_residual(Wbar, v, mu, 0.0));
  const SpectralField rhs = tpb::s1_residual(w, v, mu);
  EXPECT_LE(tpb::l2_norm(lhs - rhs), 1e-10 * tpb::l2_norm(rhs));

  // Quadrature oracle for the S1 residual of w = W0_x.
  const auto deriv = [&](const SpectralField& F, double t, double x) { return tpb::oracle::eval(F, t, x); };
  const SpectralField wt = tpb::d_t(w), wxx = tpb::d_xx(w), wx = tpb::d_x(w), vx = tpb::d_x(v);
  const SpectralField ref = tpb::oracle::project(
      [&](double t, double x) {
        const double ww = deriv(w, t, x), vv = deriv(v, t, x);
        return deriv(wt, t, x) - mu * deriv(wxx, t, x) + ww * deriv(wx, t, x) + deriv(vx, t, x) * ww +
               vv * deriv(wx, t, x);
      },
      8, 8, Basis::DirichletSine, 32, 48);
  EXPECT_LE(tpb::l2_norm(rhs - ref), 1e-10 * tpb::l2_norm(ref));
}

TEST(Lift, ProjectionInvertsLift) {
  const SpectralField v = smooth_advection(8, 6, 1.0);
  const SpectralField w = tpb::random_field(10, 6, 6, 1.5);
  const ColeHopfElement up = tpb::lift_s1_to_s2(w, v, 0.4, kNoCheck);
  EXPECT_NEAR(std::abs(up.W(0, 0)), 0.0, 1e-16);
  const ColeHopfElement down = tpb::project_s2_to_s1(up);
  EXPECT_EQ(down.kind, SetKind::S1);
  EXPECT_LE(tpb::l2_norm(down.w - w), 1e-10 * tpb::l2_norm(w));
}

TEST(Project, QuotientInvariance) {
  const SpectralField W = smooth_potential(11, 5, 1.0, 1.0);
  SpectralField shifted = W;
  shifted(0, 0) += 3.0;
  const SpectralField v(5, 5);
  EXPECT_EQ(tpb::project_s2_to_s1(s2(W, v, 0.0)).w.coeffs(), tpb::project_s2_to_s1(s2(shifted, v, 0.0)).w.coeffs());
  EXPECT_EQ(tpb::project_s2_to_s1(s2(SpectralField(5, 5, Basis::NeumannCosine), v, 0.0)).w.max_abs(), 0.0);
}

TEST(Exponential, ZeroPotential) {
  const ColeHopfElement e = tpb::s2_to_s3(s2(SpectralField(4, 4, Basis::NeumannCosine), SpectralField(4, 4), 0.0), 0.7);
  EXPECT_EQ(e.kind, SetKind::S3);
  EXPECT_NEAR(e.phi(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR((e.phi - [] {
                 SpectralField one(4, 4, Basis::NeumannCosine);
                 one.set_mode(0, 0, 1.0);
                 return one;
               }()).max_abs(),
              0.0, 1e-15);
  EXPECT_EQ(e.K, 0.0);
}

TEST(Exponential, NormalizedToUnitMaximum) {
  const double mu = 0.2;
  const ColeHopfElement e = tpb::s2_to_s3(s2(smooth_potential(12, 16, mu, 0.5), smooth_advection(13, 16, 1.0), 0.3), mu);
  const tpb::GridField g = tpb::to_grid(e.phi, 66, 35);
  EXPECT_NEAR(g.values.maxCoeff(), 1.0, 1e-9);
  EXPECT_GT(g.values.minCoeff(), 0.0);
  EXPECT_NEAR(e.K, 0.3 / (2 * mu), 1e-15);
}

// Both sides of phi_t - mu phi_xx + v phi_x + (K/2mu) phi = -(1/2mu) r phi, the
// right-hand side evaluated pointwise from W and projected by quadrature.
TEST(Exponential, ChainRuleIdentityAgainstQuadrature) {
  const double mu = 0.1, K = 0.25;
  const int n = 32;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const SpectralField W = smooth_potential(20 + s, n, mu, 0.5);
    const SpectralField v = smooth_advection(30 + s, n, 2.0);
    const ColeHopfElement e = tpb::s2_to_s3(s2(W, v, K), mu, kNoCheck);
    const SpectralField lhs = tpb::s3_residual(e.phi, v, mu, K / (2 * mu));

    const SpectralField Wlow = tpb::resized(W, 2, 2), vlow = tpb::resized(v, 2, 3);
    const SpectralField Wt = tpb::d_t(Wlow), Wx = tpb::d_x(Wlow), Wxx = tpb::d_xx(Wlow);
    const SpectralField rhs = tpb::oracle::project(
        [&](double t, double x) {
          const double wx = tpb::oracle::eval(Wx, t, x);
          const double r = tpb::oracle::eval(Wt, t, x) - mu * tpb::oracle::eval(Wxx, t, x) + 0.5 * wx * wx +
                           tpb::oracle::eval(vlow, t, x) * wx - K;
          const double phi = std::exp(-tpb::oracle::eval(Wlow, t, x) / (2 * mu));
          return -r * phi / (2 * mu);
        },
        6, 6, Basis::NeumannCosine, 64, 64);
    // phi is max-normalized on the padded grid; rescale the oracle to match.
    const double ratio = e.phi(0, 0).real() /
                         tpb::oracle::project(
                             [&](double t, double x) {
                               return std::exp(-tpb::oracle::eval(Wlow, t, x) / (2 * mu));
                             },
                             0, 0, Basis::NeumannCosine, 64, 64)(0, 0)
                             .real();
    const SpectralField lhs_low = tpb::resized(lhs, 6, 6);
    EXPECT_LE(tpb::l2_norm(lhs_low - ratio * rhs), 1e-8 * tpb::l2_norm(lhs_low)) << s;
    EXPECT_LE(tpb::chain_rule_defect(W, e.phi, v, mu, K), 1e-8);
  }
}

TEST(Exponential, RoughPotentialRejected) {
  const double mu = 0.01;
  SpectralField W = tpb::random_field(40, 3, 3, 0.5, Basis::NeumannCosine);
  W *= 2.0;
  EXPECT_THROW(tpb::s2_to_s3(s2(W, SpectralField(3, 3), 0.0), mu), tpb::ProjectionAccuracyError);
}

TEST(Logarithm, ConstantOne) {
  ColeHopfElement e;
  e.kind = SetKind::S3;
  e.phi = SpectralField(3, 3, Basis::NeumannCosine);
  e.phi.set_mode(0, 0, 1.0);
  e.v = SpectralField(3, 3);
  const ColeHopfElement back = tpb::s3_to_s2(e, 0.5);
  EXPECT_LT(back.W.max_abs(), 1e-15);
  EXPECT_EQ(back.K, 0.0);
}

TEST(Logarithm, ExpCosineGivesCosine) {
  const double mu = 0.4;
  ColeHopfElement e;
  e.kind = SetKind::S3;
  e.phi = tpb::oracle::project([](double, double x) { return std::exp(-std::cos(kPi * x)); }, 2, 24,
                               Basis::NeumannCosine, 8, 128);
  e.v = SpectralField(2, 24);
  const ColeHopfElement back = tpb::s3_to_s2(e, mu);
  SpectralField expect(2, 24, Basis::NeumannCosine);
  expect.set_mode(0, 1, 2 * mu / kSqrt2);
  EXPECT_LT((back.W - expect).max_abs(), 1e-12);
}

TEST(Logarithm, RejectsNonPositive) {
  ColeHopfElement e;
  e.kind = SetKind::S3;
  e.phi = SpectralField(2, 2, Basis::NeumannCosine);
  e.phi.set_mode(0, 1, 1.0);
  e.v = SpectralField(2, 2);
  EXPECT_THROW(tpb::s3_to_s2(e, 1.0), tpb::NonPositiveError);
}

TEST(Logarithm, RoundTripWithExponential) {
  const double mu = 0.1;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SpectralField W = smooth_potential(50 + s, 16, mu, 0.5);
    const ColeHopfElement e = s2(W, smooth_advection(60 + s, 16, 1.0), 0.1);
    const ColeHopfElement back = tpb::s3_to_s2(tpb::s2_to_s3(e, mu, kNoCheck), mu);
    EXPECT_LE(tpb::l2_norm(back.W - W), 1e-9 * tpb::l2_norm(W));
    EXPECT_NEAR(back.K, e.K, 1e-15);
  }
}

TEST(PeriodMap, ConstantIsFixed) {
  const tpb::SpaceProfile out = tpb::evolve_period_map(SpectralField(4, 4), tpb::SpaceProfile::constant(16), 1.0);
  EXPECT_EQ(out.c(0), 1.0);
  EXPECT_EQ(out.c.tail(16).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PeriodMap, HeatDecayOfFirstCosine) {
  for (double mu : {1.0, 0.1}) {
    tpb::SpaceProfile psi = tpb::SpaceProfile::constant(8);
    psi.c(1) = 1.0 / kSqrt2;  // 1 + cos(pi x)
    const tpb::SpaceProfile out = tpb::evolve_period_map(SpectralField(4, 4), psi, mu);
    EXPECT_NEAR(out.c(0), 1.0, 1e-15);
    EXPECT_NEAR(out.c(1) * kSqrt2, std::exp(-mu * kPi * kPi), 1e-6);
  }
}

TEST(PeriodMap, PreservesNonnegativity) {
  tpb::SpaceProfile psi = tpb::SpaceProfile::constant(32, 0.5);
  psi.c(1) = 0.5 / kSqrt2;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const double mu = s % 2 ? 0.1 : 1.0;
    const tpb::SpaceProfile out = tpb::evolve_period_map(smooth_advection(70 + s, 8, 0.5 * (s % 5 + 1)), psi, mu);
    EXPECT_GE(out.values(129).minCoeff(), -1e-8);
  }
}

TEST(PeriodMap, Linearity) {
  const SpectralField v = smooth_advection(80, 6, 2.0);
  tpb::SpaceProfile psi = tpb::SpaceProfile::constant(16);
  psi.c(2) = 0.3;
  tpb::SpaceProfile twice = psi;
  twice.c *= 2.0;
  const tpb::SpaceProfile a = tpb::evolve_period_map(v, psi, 0.5);
  const tpb::SpaceProfile b = tpb::evolve_period_map(v, twice, 0.5);
  EXPECT_LT((b.c - 2.0 * a.c).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PeriodMap, TooFewStepsDetected) {
  tpb::SpaceProfile psi = tpb::SpaceProfile::constant(16);
  psi.c(3) = 0.5;
  EXPECT_THROW(tpb::evolve_period_map(smooth_advection(81, 6, 5.0), psi, 0.05, 4), tpb::StepCountError);
}

TEST(Monodromy, HeatFlow) {
  const tpb::MonodromyResult r = tpb::monodromy_leading_pair(SpectralField(4, 4), 1.0);
  EXPECT_NEAR(r.rho, 1.0, 1e-14);
  EXPECT_LE(r.flatness, 1e-12);
}

TEST(Monodromy, SolvedBurgersField) {
  tpb::SolverConfig cfg;
  cfg.mu = 0.1;
  SpectralField f(12, 12);
  f.set_mode(0, 1, 1.0);
  f.set_mode(1, 1, Complex(0.6, -0.3));
  f.set_mode(0, 2, -0.4);
  f *= 2.0 / tpb::dual_norm(f);
  const tpb::SolveReport u = tpb::homotopy_solve(f, cfg);
  ASSERT_TRUE(u.converged);
  const tpb::MonodromyResult r = tpb::monodromy_leading_pair(u.u, cfg.mu);
  EXPECT_LE(std::abs(r.rho - 1.0), 1e-6);
  EXPECT_LE(r.flatness, 1e-5);
  EXPECT_NEAR(r.eigfun.values(65).maxCoeff(), 1.0, 1e-12);
}

TEST(Uniqueness, ZeroForcing) {
  const tpb::UniquenessReport r = tpb::verify_uniqueness(SpectralField(6, 6), tpb::SolverConfig{}, 3);
  EXPECT_TRUE(r.unique);
  for (const SpectralField& u : r.solutions) EXPECT_LT(u.max_abs(), 1e-12);
}

TEST(Uniqueness, ManufacturedForcing) {
  SpectralField ustar(12, 12);
  ustar.set_mode(1, 1, Complex(0.0, -0.15));
  ustar.set_mode(2, 2, 0.05);
  const SpectralField f = tpb::BurgersOperator(1.0).apply_T(ustar);
  const tpb::UniquenessReport r = tpb::verify_uniqueness(f, tpb::SolverConfig{}, 3);
  EXPECT_TRUE(r.unique);
  EXPECT_LE(r.max_distance, 1e-8);
}

TEST(Uniqueness, HarderRegimeSingleCluster) {
  tpb::SolverConfig cfg;
  cfg.mu = 0.1;
  SpectralField f(10, 10);
  f.set_mode(0, 1, 1.0);
  f.set_mode(1, 1, Complex(0.6, -0.3));
  f.set_mode(1, 2, Complex(0.0, 0.25));
  f *= 2.0 / tpb::dual_norm(f);
  const tpb::UniquenessReport r = tpb::verify_uniqueness(f, cfg, 5);
  for (bool c : r.converged) EXPECT_TRUE(c);
  EXPECT_TRUE(r.unique);
  EXPECT_LE(r.max_distance, 1e-6);
  EXPECT_LE(r.max_s1_residual, 1e-8);
}

}  // namespace
