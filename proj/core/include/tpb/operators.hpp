#pragma once

// Fourier-multiplier calculus in time, modal derivatives in space, and the
// Burgers operator T = L + S in weak form.
//
// Dual elements (results of L, S, T) are stored in the same coefficient
// layout as primal Dirichlet fields and act through pairing(f, v).

#include "tpb/spectral_field.hpp"

namespace tpb {

/// sgn(0) = 0.
constexpr int sgn(int n) noexcept { return (n > 0) - (n < 0); }

/// A time Fourier multiplier sigma(n) with sigma(-n) = conj(sigma(n)).
class TimeMultiplier {
 public:
  /// (2 pi i n)^s on the principal branch: |2 pi n|^s e^{i sgn(n) s pi/2}.
  static TimeMultiplier fractional(double order);
  /// Conjugate symbol |2 pi n|^s e^{-i sgn(n) s pi/2}.
  static TimeMultiplier fractional_adjoint(double order);
  /// -i sgn(n).
  static TimeMultiplier hilbert();

  Complex operator()(int n) const;
  SpectralField apply(const SpectralField& u) const;

 private:
  enum class Kind { Fractional, FractionalAdjoint, Hilbert };
  TimeMultiplier(Kind kind, double order) : kind_(kind), order_(order) {}

  Kind kind_;
  double order_;
};

SpectralField half_derivative(const SpectralField& u);
SpectralField half_derivative_adjoint(const SpectralField& u);
SpectralField hilbert(const SpectralField& u);

/// Multiplies mode n by 2 pi i n.
SpectralField d_t(const SpectralField& u);
/// Sine fields map to cosine fields (m pi factor) and cosine fields to sine
/// fields (-m pi factor, the constant mode drops out).
SpectralField d_x(const SpectralField& u);
/// Stays in the input basis with factor -(m pi)^2.
SpectralField d_xx(const SpectralField& u);

/// (u - H u) / sqrt(2), the test-function rotation that makes L coercive.
SpectralField coercivity_rotation(const SpectralField& u);

/// Diagonal symbol of L: 2 pi i n + mu (m pi)^2.
class LinearSymbol {
 public:
  explicit LinearSymbol(double mu);

  double mu() const noexcept { return mu_; }
  Complex operator()(int n, int m) const noexcept;

 private:
  double mu_;
};

/// T_lambda(u) = L u + lambda S(u) on Dirichlet fields.
class BurgersOperator {
 public:
  explicit BurgersOperator(double mu) : symbol_(mu) {}

  double mu() const noexcept { return symbol_.mu(); }
  const LinearSymbol& symbol() const noexcept { return symbol_; }

  SpectralField apply_L(const SpectralField& u) const;
  SpectralField invert_L(const SpectralField& f) const;
  /// u u_x = (u^2)_x / 2 as a dual element: <S(u), v> = -(u^2, v_x) / 2.
  SpectralField apply_S(const SpectralField& u) const;
  SpectralField apply_T(const SpectralField& u, double lambda = 1.0) const;
  /// Gateaux derivative of T at m in direction w: L w + (m w)_x.
  SpectralField apply_T_prime(const SpectralField& m, const SpectralField& w) const;

 private:
  SpectralField diagonal(const SpectralField& u, bool inverse) const;

  LinearSymbol symbol_;
};

}  // namespace tpb
