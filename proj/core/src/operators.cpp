#include "tpb/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tpb/errors.hpp"

namespace tpb {
namespace {

constexpr double kPi = std::numbers::pi;

void require_dirichlet(const SpectralField& u, const char* what) {
  if (u.basis() != Basis::DirichletSine) {
    throw BasisMismatchError(std::string(what) + ": expected a Dirichlet-sine field");
  }
}

}  // namespace

TimeMultiplier TimeMultiplier::fractional(double order) {
  if (!(order >= 0.0)) throw std::invalid_argument("fractional order must be >= 0");
  return {Kind::Fractional, order};
}

TimeMultiplier TimeMultiplier::fractional_adjoint(double order) {
  if (!(order >= 0.0)) throw std::invalid_argument("fractional order must be >= 0");
  return {Kind::FractionalAdjoint, order};
}

TimeMultiplier TimeMultiplier::hilbert() { return {Kind::Hilbert, 0.0}; }

Complex TimeMultiplier::operator()(int n) const {
  const int s = sgn(n);
  switch (kind_) {
    case Kind::Hilbert:
      return {0.0, -static_cast<double>(s)};
    case Kind::Fractional:
    case Kind::FractionalAdjoint: {
      if (n == 0) return order_ == 0.0 ? 1.0 : 0.0;
      const double modulus = std::pow(2.0 * kPi * std::abs(n), order_);
      const double phase = s * order_ * kPi / 2.0;
      const double direction = kind_ == Kind::Fractional ? 1.0 : -1.0;
      return {modulus * std::cos(phase), direction * modulus * std::sin(phase)};
    }
  }
  return 0.0;
}

SpectralField TimeMultiplier::apply(const SpectralField& u) const {
  SpectralField out = u;
  for (int n = -u.n_t(); n <= u.n_t(); ++n) out.coeffs().row(n + u.n_t()) *= (*this)(n);
  return out;
}

SpectralField half_derivative(const SpectralField& u) {
  return TimeMultiplier::fractional(0.5).apply(u);
}

SpectralField half_derivative_adjoint(const SpectralField& u) {
  return TimeMultiplier::fractional_adjoint(0.5).apply(u);
}

SpectralField hilbert(const SpectralField& u) { return TimeMultiplier::hilbert().apply(u); }

SpectralField d_t(const SpectralField& u) {
  SpectralField out = u;
  for (int n = -u.n_t(); n <= u.n_t(); ++n) {
    out.coeffs().row(n + u.n_t()) *= Complex(0.0, 2.0 * kPi * n);
  }
  return out;
}

SpectralField d_x(const SpectralField& u) {
  if (u.basis() == Basis::DirichletSine) {
    SpectralField out(u.n_t(), u.n_x(), Basis::NeumannCosine);
    for (int m = 1; m <= u.n_x(); ++m) out.coeffs().col(m) = (m * kPi) * u.coeffs().col(m - 1);
    return out;
  }
  SpectralField out(u.n_t(), u.n_x(), Basis::DirichletSine);
  for (int m = 1; m <= u.n_x(); ++m) out.coeffs().col(m - 1) = (-m * kPi) * u.coeffs().col(m);
  return out;
}

SpectralField d_xx(const SpectralField& u) {
  SpectralField out = u;
  for (int m = u.first_mode(); m <= u.n_x(); ++m) {
    out.coeffs().col(m - u.first_mode()) *= -(m * kPi) * (m * kPi);
  }
  return out;
}

SpectralField coercivity_rotation(const SpectralField& u) {
  return (u - hilbert(u)) * (1.0 / std::numbers::sqrt2);
}

LinearSymbol::LinearSymbol(double mu) : mu_(mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("viscosity mu must be positive");
}

Complex LinearSymbol::operator()(int n, int m) const noexcept {
  return {mu_ * (m * kPi) * (m * kPi), 2.0 * kPi * n};
}

SpectralField BurgersOperator::diagonal(const SpectralField& u, bool inverse) const {
  SpectralField out = u;
  for (int m = 1; m <= u.n_x(); ++m) {
    for (int n = -u.n_t(); n <= u.n_t(); ++n) {
      const Complex s = symbol_(n, m);
      out(n, m) = inverse ? u(n, m) / s : u(n, m) * s;
    }
  }
  return out;
}

SpectralField BurgersOperator::apply_L(const SpectralField& u) const {
  require_dirichlet(u, "apply_L");
  return diagonal(u, false);
}

SpectralField BurgersOperator::invert_L(const SpectralField& f) const {
  require_dirichlet(f, "invert_L");
  return diagonal(f, true);
}

SpectralField BurgersOperator::apply_S(const SpectralField& u) const {
  require_dirichlet(u, "apply_S");
  return 0.5 * d_x(dealiased_product(u, u));
}

SpectralField BurgersOperator::apply_T(const SpectralField& u, double lambda) const {
  SpectralField out = apply_L(u);
  if (lambda != 0.0) out += lambda * apply_S(u);
  return out;
}

SpectralField BurgersOperator::apply_T_prime(const SpectralField& m,
                                             const SpectralField& w) const {
  require_dirichlet(m, "apply_T_prime");
  require_dirichlet(w, "apply_T_prime");
  return apply_L(w) + d_x(dealiased_product(m, w));
}

}  // namespace tpb
