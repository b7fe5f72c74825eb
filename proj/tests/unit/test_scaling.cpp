#include <cmath>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tpb/norms.hpp"
#include "tpb/scaling.hpp"
#include "tpb/solver.hpp"

namespace {

using tpb::Complex;
using tpb::PhysicalProblem;
using tpb::SpectralField;
using tpb::oracle::kPi;
using tpb::oracle::kSqrt2;

// p(t, x) = 0.3 sin(2 pi t) s1(x) + 0.1 cos(4 pi t) s2(x); index 0 value, 1 d/dt, 2 d/dx, 3 d2/dx2.
double profile(double t, double x, int which) {
  const double a = std::sin(2 * kPi * t), at = 2 * kPi * std::cos(2 * kPi * t);
  const double b = std::cos(4 * kPi * t), bt = -4 * kPi * std::sin(4 * kPi * t);
  const double s1 = kSqrt2 * std::sin(kPi * x), s1x = kSqrt2 * kPi * std::cos(kPi * x);
  const double s2 = kSqrt2 * std::sin(2 * kPi * x), s2x = kSqrt2 * 2 * kPi * std::cos(2 * kPi * x);
  switch (which) {
    case 0: return 0.3 * a * s1 + 0.1 * b * s2;
    case 1: return 0.3 * at * s1 + 0.1 * bt * s2;
    case 2: return 0.3 * a * s1x + 0.1 * b * s2x;
    default: return -kPi * kPi * (0.3 * a * s1 + 0.4 * b * s2);
  }
}

SpectralField profile_coeffs(int n) {
  SpectralField p(n, n);
  p.set_mode(1, 1, Complex(0.0, -0.15));
  p.set_mode(2, 2, 0.05);
  return p;
}

// Physical forcing for u(t', x') = (L/T) p(t'/T, x'/L), sampled in unit coordinates.
SpectralField physical_forcing(double T, double L, double nu, int n) {
  return tpb::oracle::project(
      [&](double t, double x) {
        return (L / (T * T)) * (profile(t, x, 1) + profile(t, x, 0) * profile(t, x, 2)) -
               nu / (T * L) * profile(t, x, 3);
      },
      n, n, tpb::Basis::DirichletSine, 32, 64);
}

TEST(Normalize, ViscosityGroup) {
  PhysicalProblem p{2.0, 3.0, 0.5, SpectralField(2, 2)};
  const tpb::NormalizedProblem n = tpb::normalize(p);
  EXPECT_NEAR(n.mu, 1.0 / 9.0, 1e-16);
  EXPECT_FALSE(n.flip);
}

TEST(Normalize, IdentityScaling) {
  const SpectralField g = tpb::random_field(3, 4, 4, 1.0);
  const tpb::NormalizedProblem n = tpb::normalize({1.0, 1.0, 1.0, g});
  EXPECT_EQ(n.mu, 1.0);
  EXPECT_FALSE(n.flip);
  EXPECT_TRUE(n.f.coeffs() == g.coeffs());
}

TEST(Normalize, NegativeViscosityReversesTime) {
  const SpectralField g = tpb::random_field(4, 4, 4, 1.0);
  const tpb::NormalizedProblem n = tpb::normalize({1.0, 1.0, -1.0, g});
  EXPECT_EQ(n.mu, 1.0);
  EXPECT_TRUE(n.flip);
  for (int k = -4; k <= 4; ++k)
    for (int m = 1; m <= 4; ++m) EXPECT_EQ(n.f(k, m), g(-k, m));
}

TEST(Normalize, RejectsDegenerateScales) {
  EXPECT_THROW(tpb::normalize({0.0, 1.0, 1.0, SpectralField(1, 1)}), std::invalid_argument);
  EXPECT_THROW(tpb::normalize({1.0, -2.0, 1.0, SpectralField(1, 1)}), std::invalid_argument);
  EXPECT_THROW(tpb::normalize({1.0, 1.0, 0.0, SpectralField(1, 1)}), std::invalid_argument);
}

TEST(Denormalize, UnitScalesAreIdentity) {
  const SpectralField w = tpb::random_field(5, 3, 3, 1.0);
  const tpb::PhysicalSolution s = tpb::denormalize(w, {1.0, 1.0, 1.0, SpectralField(3, 3)});
  EXPECT_TRUE(s.normalized().coeffs() == w.coeffs());
  EXPECT_EQ(s.velocity_scale(), 1.0);
  EXPECT_TRUE(s.samples(7, 3).values.isApprox(tpb::to_grid(w, 7, 3).values));
}

TEST(Denormalize, ZeroField) {
  const tpb::PhysicalSolution s = tpb::denormalize(SpectralField(3, 3), {2.0, 3.0, -0.5, SpectralField(3, 3)});
  EXPECT_EQ(s.samples(7, 3).values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Denormalize, PhysicalCoordinates) {
  const tpb::PhysicalSolution s(SpectralField(2, 2), 2.0, 3.0);
  EXPECT_DOUBLE_EQ(s.physical_t(3, 6), 1.0);
  EXPECT_DOUBLE_EQ(s.physical_x(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(s.velocity_scale(), 1.5);
}

class CommutingDiagram : public ::testing::TestWithParam<double> {};

// Solving the normalized problem and mapping back recovers the physical solution
// built by hand from the profile.
TEST_P(CommutingDiagram, RecoversPhysicalProfile) {
  const double T = 2.0, L = 3.0, nu = GetParam();
  const int n = 12;
  const PhysicalProblem p{T, L, nu, physical_forcing(T, L, nu, n)};
  const tpb::NormalizedProblem np = tpb::normalize(p);
  tpb::SolverConfig cfg;
  cfg.mu = np.mu;
  const tpb::SolveReport r = tpb::homotopy_solve(np.f, cfg);
  ASSERT_TRUE(r.converged);
  const tpb::PhysicalSolution s = tpb::denormalize(r.u, p);
  EXPECT_LE(tpb::l2_norm(s.normalized() - profile_coeffs(n)), 1e-10);

  const tpb::GridField g = s.samples(25, 12);
  for (int j = 0; j < g.m_t(); j += 5)
    for (int i = 0; i < g.m_x(); i += 3)
      EXPECT_NEAR(g.values(j, i), (L / T) * profile(g.t(j), g.x(i), 0), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Viscosity, CommutingDiagram, ::testing::Values(0.5, -0.5));

}  // namespace
