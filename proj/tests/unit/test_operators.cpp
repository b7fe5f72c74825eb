#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tpb/norms.hpp"
#include "tpb/operators.hpp"

namespace {

using tpb::Basis;
using tpb::BurgersOperator;
using tpb::Complex;
using tpb::SpectralField;
using tpb::oracle::kPi;
using tpb::oracle::kSqrt2;

double rel_err(const SpectralField& a, const SpectralField& b) {
  return tpb::l2_norm(a - b) / std::max(tpb::l2_norm(b), 1e-300);
}

SpectralField cos_t_sin_x(int n_t, int n_x) {
  SpectralField u(n_t, n_x);
  u.set_mode(1, 1, 0.5);
  return u;
}

TEST(Multipliers, ConjugateSymmetry) {
  for (const auto& mult : {tpb::TimeMultiplier::fractional(0.5), tpb::TimeMultiplier::fractional_adjoint(0.5),
                           tpb::TimeMultiplier::hilbert()}) {
    for (int n = 1; n < 6; ++n) EXPECT_EQ(mult(-n), std::conj(mult(n)));
  }
}

TEST(HalfDerivative, KillsTimeConstant) {
  SpectralField u(3, 3);
  u.set_mode(0, 2, 1.7);
  EXPECT_EQ(tpb::half_derivative(u).max_abs(), 0.0);
  EXPECT_EQ(tpb::half_derivative_adjoint(u).max_abs(), 0.0);
  EXPECT_EQ(tpb::hilbert(u).max_abs(), 0.0);
  EXPECT_EQ(tpb::d_t(u).max_abs(), 0.0);
}

TEST(HalfDerivative, CosineGetsPhaseShift) {
  const SpectralField h = tpb::half_derivative(cos_t_sin_x(2, 2));
  for (double t : {0.0, 0.13, 0.4, 0.77}) {
    const double x = 0.31;
    const double expect = std::sqrt(2 * kPi) * std::cos(2 * kPi * t + kPi / 4) * kSqrt2 * std::sin(kPi * x);
    EXPECT_NEAR(tpb::oracle::eval(h, t, x), expect, 1e-14);
  }
}

TEST(HalfDerivative, SquaresToTimeDerivative) {
  const SpectralField u = tpb::random_field(21, 8, 6, 1.0);
  EXPECT_LT(rel_err(tpb::half_derivative(tpb::half_derivative(u)), tpb::d_t(u)), 1e-14);
}

TEST(HalfDerivativeAdjoint, EqualsHilbertOfHalfDerivative) {
  const SpectralField u = tpb::random_field(22, 8, 6, 1.0);
  EXPECT_LT(rel_err(tpb::half_derivative_adjoint(u), tpb::hilbert(tpb::half_derivative(u))), 1e-14);
  EXPECT_LT(rel_err(tpb::half_derivative_adjoint(u), tpb::half_derivative(tpb::hilbert(u))), 1e-14);
}

TEST(HalfDerivativeAdjoint, AdjointPairing) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SpectralField u = tpb::random_field(100 + s, 8, 6, 1.0);
    const SpectralField phi = tpb::random_field(200 + s, 8, 6, 1.0);
    const double lhs = tpb::pairing(tpb::half_derivative(u), phi);
    const double rhs = tpb::pairing(u, tpb::half_derivative_adjoint(phi));
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Hilbert, CosineToSine) {
  const SpectralField h = tpb::hilbert(cos_t_sin_x(2, 2));
  for (double t : {0.05, 0.3, 0.61}) {
    const double x = 0.7;
    EXPECT_NEAR(tpb::oracle::eval(h, t, x), std::sin(2 * kPi * t) * kSqrt2 * std::sin(kPi * x), 1e-14);
  }
}

TEST(Hilbert, RealPairingVanishes) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SpectralField u = tpb::random_field(300 + s, 8, 6, 1.0);
    EXPECT_LE(std::abs(tpb::pairing(u, tpb::hilbert(u))), 1e-15 * tpb::l2_norm(u) * tpb::l2_norm(u));
  }
}

TEST(SpaceDerivatives, SineEigenfunction) {
  SpectralField u(1, 3);
  u.set_mode(0, 1, 1.0);
  const SpectralField uxx = tpb::d_xx(u);
  EXPECT_NEAR(uxx(0, 1).real(), -kPi * kPi, 1e-13);
  EXPECT_EQ(uxx.basis(), Basis::DirichletSine);
}

TEST(SpaceDerivatives, SineToCosine) {
  SpectralField u(1, 3);
  u.set_mode(0, 2, 1.0);
  const SpectralField ux = tpb::d_x(u);
  EXPECT_EQ(ux.basis(), Basis::NeumannCosine);
  EXPECT_NEAR(ux(0, 2).real(), 2 * kPi, 1e-13);
  EXPECT_NEAR(ux.max_abs(), 2 * kPi, 1e-13);
}

TEST(SpaceDerivatives, CosineBackToSineAndConstantsVanish) {
  SpectralField c(1, 3, Basis::NeumannCosine);
  c.set_mode(0, 0, 4.0);
  c.set_mode(0, 3, 1.0);
  const SpectralField cx = tpb::d_x(c);
  EXPECT_EQ(cx.basis(), Basis::DirichletSine);
  EXPECT_NEAR(cx(0, 3).real(), -3 * kPi, 1e-13);
  EXPECT_NEAR(cx.max_abs(), 3 * kPi, 1e-13);
}

TEST(SpaceDerivatives, AgainstPointEvaluation) {
  const SpectralField u = tpb::random_field(5, 3, 5, 1.0);
  const SpectralField ux = tpb::d_x(u);
  const double h = 1e-5;
  for (double x : {0.2, 0.5, 0.83}) {
    const double fd = (tpb::oracle::eval(u, 0.3, x + h) - tpb::oracle::eval(u, 0.3, x - h)) / (2 * h);
    EXPECT_NEAR(tpb::oracle::eval(ux, 0.3, x), fd, 1e-7);
  }
}

TEST(LinearOperator, SymbolOnFirstMode) {
  SpectralField u(1, 2);
  u.set_mode(0, 1, 1.0);
  const SpectralField Lu = BurgersOperator(1.0).apply_L(u);
  EXPECT_NEAR(std::abs(Lu(0, 1) - kPi * kPi), 0.0, 1e-13);
  EXPECT_EQ(BurgersOperator(1.0).apply_L(SpectralField(2, 2)).max_abs(), 0.0);
}

TEST(LinearOperator, SymbolNeverVanishes) {
  const tpb::LinearSymbol s(1e-6);
  for (int n = -20; n <= 20; ++n)
    for (int m = 1; m <= 20; ++m) EXPECT_GT(s(n, m).real(), 0.0);
  EXPECT_THROW(tpb::LinearSymbol(0.0), std::invalid_argument);
}

TEST(LinearOperator, RealPairingIsViscousEnergy) {
  const double mu = 0.3;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SpectralField u = tpb::random_field(400 + s, 6, 6, 1.0);
    const double lhs = tpb::pairing(BurgersOperator(mu).apply_L(u), u);
    const double dx = tpb::dx_norm(u);
    EXPECT_NEAR(lhs, mu * dx * dx, 1e-12 * lhs);
  }
}

TEST(LinearOperator, InverseOfFirstMode) {
  SpectralField f(1, 2);
  f.set_mode(0, 1, 1.0);
  const SpectralField u = BurgersOperator(1.0).invert_L(f);
  EXPECT_NEAR(std::abs(u(0, 1) - 1.0 / (kPi * kPi)), 0.0, 1e-15);
  EXPECT_EQ(BurgersOperator(1.0).invert_L(SpectralField(1, 2)).max_abs(), 0.0);
}

// Weak form assembled by quadrature of the analytic basis functions on the
// 9-mode space n in {-1,0,1}, m in {1,2,3}.
TEST(LinearOperator, InverseMatchesDenseGalerkin) {
  const double mu = 1.0;
  SpectralField f(1, 3);
  f.set_mode(1, 1, Complex(1.0, 0.0));
  f.set_mode(0, 2, 0.4);
  f.set_mode(1, 3, Complex(-0.2, 0.7));

  struct Mode {
    int n, m;
  };
  std::vector<Mode> modes;
  for (int n = -1; n <= 1; ++n)
    for (int m = 1; m <= 3; ++m) modes.push_back({n, m});
  const tpb::oracle::Rule gx = tpb::oracle::gauss_legendre(32);
  const int q_t = 16;
  const auto space_int = [&](auto&& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < gx.x.size(); ++i) s += gx.w[i] * g(gx.x[i]);
    return s;
  };
  const auto time_int = [&](int n, int k) {
    Complex s = 0.0;
    for (int j = 0; j < q_t; ++j) s += std::polar(1.0, 2 * kPi * (n - k) * j / static_cast<double>(q_t));
    return s / static_cast<double>(q_t);
  };
  Eigen::MatrixXcd A(9, 9);
  Eigen::VectorXcd b(9);
  for (int r = 0; r < 9; ++r) {
    const Mode test = modes[r];
    for (int c = 0; c < 9; ++c) {
      const Mode trial = modes[c];
      const Complex tt = time_int(trial.n, test.n);
      const double mass = space_int([&](double x) {
        return 2 * std::sin(trial.m * kPi * x) * std::sin(test.m * kPi * x);
      });
      const double stiff = space_int([&](double x) {
        return 2 * trial.m * test.m * kPi * kPi * std::cos(trial.m * kPi * x) * std::cos(test.m * kPi * x);
      });
      A(r, c) = tt * (Complex(0.0, 2 * kPi * trial.n) * mass + mu * stiff);
    }
    b(r) = f(test.n, test.m);
  }
  const Eigen::VectorXcd x = A.partialPivLu().solve(b);
  const SpectralField u = BurgersOperator(mu).invert_L(f);
  for (int r = 0; r < 9; ++r) EXPECT_NEAR(std::abs(u(modes[r].n, modes[r].m) - x(r)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(u(1, 1) - 1.0 / Complex(kPi * kPi, 2 * kPi)), 0.0, 1e-15);
}

TEST(LinearOperator, ApplyInvertIdentity) {
  const BurgersOperator op(0.05);
  const SpectralField f = tpb::random_field(7, 16, 16, 1.0);
  EXPECT_LT(rel_err(op.apply_L(op.invert_L(f)), f), 1e-14);
}

TEST(Coercivity, RotatedPairingIdentity) {
  const double mu = 0.2;
  const BurgersOperator op(mu);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SpectralField u = tpb::random_field(500 + s, 6, 6, 1.0);
    const double lhs = kSqrt2 * tpb::pairing(op.apply_L(u), tpb::coercivity_rotation(u));
    const double hd = tpb::half_dt_norm(u), dx = tpb::dx_norm(u);
    EXPECT_NEAR(lhs, hd * hd + mu * dx * dx, 1e-12 * lhs);
  }
}

TEST(Nonlinear, SineSquaredDerivative) {
  SpectralField u(1, 4);
  u.set_mode(0, 1, 1.0 / kSqrt2);
  const SpectralField s = BurgersOperator(1.0).apply_S(u);
  // sin(pi x) * pi cos(pi x) = (pi/2) sin(2 pi x)
  EXPECT_NEAR(s(0, 2).real(), kPi / 2 / kSqrt2, 1e-13);
  EXPECT_NEAR((s - [&] {
                SpectralField e(1, 4);
                e.set_mode(0, 2, kPi / 2 / kSqrt2);
                return e;
              }()).max_abs(),
              0.0, 1e-13);
  EXPECT_EQ(BurgersOperator(1.0).apply_S(SpectralField(1, 4)).max_abs(), 0.0);
}

TEST(Nonlinear, SkewSymmetry) {
  const BurgersOperator op(1.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SpectralField u = tpb::random_field(600 + s, 6, 8, 1.0);
    const SpectralField su = op.apply_S(u);
    EXPECT_LE(std::abs(tpb::pairing(su, u)), 1e-13 * tpb::l2_norm(su) * tpb::l2_norm(u));
  }
}

TEST(FullOperator, LambdaZeroIsLinear) {
  const BurgersOperator op(0.4);
  const SpectralField u = tpb::random_field(9, 4, 5, 1.0);
  EXPECT_LT(rel_err(op.apply_T(u, 0.0), op.apply_L(u)), 1e-15);
  EXPECT_EQ(op.apply_T(SpectralField(4, 5), 0.7).max_abs(), 0.0);
}

TEST(FullOperator, ManufacturedFieldAgainstQuadrature) {
  const double mu = 1.0;
  SpectralField u(4, 6);
  u.set_mode(1, 1, Complex(0.0, -0.15));
  u.set_mode(2, 2, 0.05);
  const SpectralField Tu = BurgersOperator(mu).apply_T(u, 1.0);
  // u = 0.3 sin(2 pi t) s1(x) + 0.1 cos(4 pi t) s2(x), s_m = sqrt2 sin(m pi x)
  const auto field = [](double t, double x, int dt, int dx) {
    const double a = 0.3, b = 0.1;
    const double ta[3] = {std::sin(2 * kPi * t), 2 * kPi * std::cos(2 * kPi * t), 0};
    const double tb[3] = {std::cos(4 * kPi * t), -4 * kPi * std::sin(4 * kPi * t), 0};
    const double s1[3] = {kSqrt2 * std::sin(kPi * x), kSqrt2 * kPi * std::cos(kPi * x),
                          -kSqrt2 * kPi * kPi * std::sin(kPi * x)};
    const double s2[3] = {kSqrt2 * std::sin(2 * kPi * x), kSqrt2 * 2 * kPi * std::cos(2 * kPi * x),
                          -kSqrt2 * 4 * kPi * kPi * std::sin(2 * kPi * x)};
    return a * ta[dt] * s1[dx] + b * tb[dt] * s2[dx];
  };
  const SpectralField ref = tpb::oracle::project(
      [&](double t, double x) {
        return field(t, x, 1, 0) - mu * field(t, x, 0, 2) + field(t, x, 0, 0) * field(t, x, 0, 1);
      },
      4, 6, Basis::DirichletSine, 32, 64);
  EXPECT_LT((Tu - ref).max_abs(), 1e-10);
}

TEST(Derivative, AtZeroIsLinear) {
  const BurgersOperator op(0.7);
  const SpectralField w = tpb::random_field(11, 4, 5, 1.0);
  EXPECT_LT(rel_err(op.apply_T_prime(SpectralField(4, 5), w), op.apply_L(w)), 1e-15);
  EXPECT_EQ(op.apply_T_prime(w, SpectralField(4, 5)).max_abs(), 0.0);
}

TEST(Derivative, SecantIdentity) {
  const BurgersOperator op(0.5);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SpectralField u = tpb::random_field(700 + s, 6, 6, 1.0);
    const SpectralField v = tpb::random_field(800 + s, 6, 6, 1.0);
    const SpectralField lhs = op.apply_T(u) - op.apply_T(v);
    const SpectralField rhs = op.apply_T_prime(0.5 * (u + v), u - v);
    EXPECT_LT(rel_err(lhs, rhs), 1e-11);
  }
}

TEST(Derivative, MatchesFiniteDifference) {
  const BurgersOperator op(0.5);
  const SpectralField m = tpb::random_field(12, 4, 5, 1.0);
  const SpectralField w = tpb::random_field(13, 4, 5, 1.0);
  const double h = 1e-6;
  const SpectralField fd = (1.0 / (2 * h)) * (op.apply_T(m + h * w) - op.apply_T(m - h * w));
  EXPECT_LT(rel_err(fd, op.apply_T_prime(m, w)), 1e-8);
}

}  // namespace
