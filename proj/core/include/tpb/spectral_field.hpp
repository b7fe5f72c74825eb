#pragma once

// Space-time modal representation of real fields on T x (0,1).
//
// A field is stored through its coefficients against the tensor basis
//
//     e^{2 pi i n t} * phi_m(x),     n = -n_t..n_t,
//
// with phi_m = sqrt(2) sin(m pi x), m = 1..n_x, for Dirichlet fields and
// phi_0 = 1, phi_m = sqrt(2) cos(m pi x), m = 0..n_x, for Neumann fields.
// Both families are orthonormal in L^2(0,1), so the L^2(Q) pairing is the
// plain coefficient sum and every norm used in the library is diagonal.
//
// Grids: time nodes t_j = j / m_t. Dirichlet grids use the interior nodes
// x_i = i / (m_x + 1), i = 1..m_x; Neumann grids use x_i = i / (m_x - 1),
// i = 0..m_x-1 (end points included). Quadrature is the trapezoid rule,
// which is exact for the trigonometric polynomials produced here.

#include <complex>
#include <cstdint>
#include <memory>

#include <Eigen/Dense>

namespace tpb {

using Complex = std::complex<double>;

enum class Basis { DirichletSine, NeumannCosine };

const char* to_string(Basis basis) noexcept;

class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int n_t, int n_x, Basis basis = Basis::DirichletSine);

  int n_t() const noexcept { return n_t_; }
  int n_x() const noexcept { return n_x_; }
  Basis basis() const noexcept { return basis_; }

  /// Smallest admissible space mode: 1 for sine fields, 0 for cosine fields.
  int first_mode() const noexcept { return basis_ == Basis::DirichletSine ? 1 : 0; }
  int time_modes() const noexcept { return 2 * n_t_ + 1; }
  int space_modes() const noexcept { return n_x_ + 1 - first_mode(); }
  Eigen::Index size() const noexcept { return coeffs_.size(); }

  Complex operator()(int n, int m) const { return coeffs_(n + n_t_, m - first_mode()); }
  Complex& operator()(int n, int m) { return coeffs_(n + n_t_, m - first_mode()); }

  /// Sets mode (n, m) and its conjugate partner (-n, m). For n = 0 only the
  /// real part is kept.
  void set_mode(int n, int m, Complex value);

  /// Rows n = -n_t..n_t, columns m = first_mode()..n_x.
  const Eigen::MatrixXcd& coeffs() const noexcept { return coeffs_; }
  Eigen::MatrixXcd& coeffs() noexcept { return coeffs_; }

  bool same_shape(const SpectralField& other) const noexcept;
  double max_abs() const;
  /// max |c(-n,m) - conj c(n,m)|; zero for an exactly real field.
  double hermitian_defect() const;
  /// Restores exact Hermitian symmetry from the n >= 0 rows.
  void enforce_hermitian();

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex scale);
  SpectralField& operator*=(double scale);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator*(Complex s, SpectralField a) { return a *= s; }

 private:
  void require_same_shape(const SpectralField& other) const;

  int n_t_ = 0;
  int n_x_ = 0;
  Basis basis_ = Basis::DirichletSine;
  Eigen::MatrixXcd coeffs_;
};

struct GridField {
  Eigen::MatrixXd values;  // (m_t x m_x), row j is time node t_j
  Basis basis = Basis::DirichletSine;

  int m_t() const noexcept { return static_cast<int>(values.rows()); }
  int m_x() const noexcept { return static_cast<int>(values.cols()); }
  double t(int j) const noexcept;
  double x(int i) const noexcept;
};

double time_node(int j, int m_t) noexcept;
double space_node(int i, int m_x, Basis basis) noexcept;

/// Pointwise evaluation of the truncated series. Requires m_t >= 2 n_t + 1
/// and m_x >= n_x (sine) or m_x >= n_x + 2 (cosine, end points included).
GridField to_grid(const SpectralField& u, int m_t, int m_x);

/// Discrete projection onto the requested basis; inverse of to_grid on
/// band-limited fields. A sine grid cannot be projected onto cosines.
SpectralField to_spectral(const GridField& g, int n_t, int n_x, Basis basis);
SpectralField to_spectral(const GridField& g, int n_t, int n_x);

/// Basis of the product of two fields: sin*sin and cos*cos are cosine
/// series, sin*cos is a sine series.
Basis product_basis(Basis a, Basis b) noexcept;

/// Multiplication by a fixed field m. The product m*w is formed on a grid
/// padded by 3/2 in both directions and projected onto product_basis(m, w)
/// modes (|n| <= n_t, m <= n_x). The projection is exact for the quadratic
/// products arising here and complex-linear in w.
class MultiplicationOperator {
 public:
  explicit MultiplicationOperator(const SpectralField& m);

  SpectralField apply(const SpectralField& w) const;

 private:
  struct Tables;
  int n_t_;
  int n_x_;
  Basis basis_;
  std::shared_ptr<const Tables> tables_;
  Eigen::MatrixXcd grid_;
};

/// Dealiased product of two fields with equal truncations.
SpectralField dealiased_product(const SpectralField& u, const SpectralField& v);

/// Deterministic pseudorandom real field with magnitude envelope
/// (1+|n|)^-decay (1+m)^-decay. Each coefficient depends only on
/// (seed, n, m, basis), so fields with larger truncations extend smaller ones.
SpectralField random_field(std::uint64_t seed, int n_t, int n_x, double decay,
                           Basis basis = Basis::DirichletSine);

/// Zero-pads or truncates to (n_t, n_x).
SpectralField resized(const SpectralField& u, int n_t, int n_x);

/// sum_{n,m} u_{nm} conj(v_{nm}): the L^2(Q) inner product.
Complex inner_product(const SpectralField& u, const SpectralField& v);

/// Real part of inner_product; the duality pairing <f, u>.
double pairing(const SpectralField& f, const SpectralField& u);

}  // namespace tpb
