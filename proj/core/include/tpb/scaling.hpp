#pragma once

// Physical problem u_t - nu u_xx + u u_x = g on (0, T) x (0, L) and its
// normalized form on the unit time torus and (0, 1):
//
//   mu = |nu| T / L^2,   f = (T^2 / L) g,   u = (L / T) u_bar.
//
// Negative viscosity is handled by reversing time: u_bar(t) = -w(-t), where
// w solves the normalized problem with positive mu and forcing f(-t).

#include "tpb/spectral_field.hpp"

namespace tpb {

struct PhysicalProblem {
  double period = 1.0;
  double length = 1.0;
  double viscosity = 1.0;
  /// g sampled on normalized coordinates, as a Dirichlet field.
  SpectralField forcing;

  /// Throws std::invalid_argument unless period, length > 0 and nu != 0.
  void validate() const;
};

struct NormalizedProblem {
  double mu = 1.0;
  SpectralField f;
  bool flip = false;
};

NormalizedProblem normalize(const PhysicalProblem& p);

/// Replaces every time mode c_n by c_{-n}: w(t) -> w(-t).
SpectralField reverse_time(const SpectralField& u);

/// Physical solution u(t, x) = (L / T) u_bar(t / T, x / L).
class PhysicalSolution {
 public:
  PhysicalSolution(SpectralField normalized, double period, double length);

  /// u_bar in normalized coordinates, orientation already restored.
  const SpectralField& normalized() const noexcept { return u_bar_; }
  double period() const noexcept { return period_; }
  double length() const noexcept { return length_; }
  double velocity_scale() const noexcept { return length_ / period_; }

  /// Samples on the grid of to_grid, with physical t and x.
  GridField samples(int m_t, int m_x) const;
  double physical_t(int j, int m_t) const noexcept;
  double physical_x(int i, int m_x) const noexcept;

 private:
  SpectralField u_bar_;
  double period_;
  double length_;
};

/// Maps the solution w of normalize(p) back to physical units, undoing the
/// time reversal when nu < 0.
PhysicalSolution denormalize(const SpectralField& w, const PhysicalProblem& p);

}  // namespace tpb
