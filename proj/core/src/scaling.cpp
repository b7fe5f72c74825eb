#include "tpb/scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace tpb {

void PhysicalProblem::validate() const {
  if (!(period > 0.0)) throw std::invalid_argument("scaling: period must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("scaling: length must be positive");
  if (viscosity == 0.0 || std::isnan(viscosity)) {
    throw std::invalid_argument("scaling: viscosity must be nonzero");
  }
}

SpectralField reverse_time(const SpectralField& u) {
  SpectralField out = u;
  out.coeffs() = u.coeffs().colwise().reverse();
  return out;
}

NormalizedProblem normalize(const PhysicalProblem& p) {
  p.validate();
  NormalizedProblem out;
  out.flip = p.viscosity < 0.0;
  out.mu = std::abs(p.viscosity) * p.period / (p.length * p.length);
  out.f = (p.period * p.period / p.length) * p.forcing;
  if (out.flip) out.f = reverse_time(out.f);
  return out;
}

PhysicalSolution::PhysicalSolution(SpectralField normalized, double period, double length)
    : u_bar_(std::move(normalized)), period_(period), length_(length) {}

double PhysicalSolution::physical_t(int j, int m_t) const noexcept {
  return period_ * time_node(j, m_t);
}

double PhysicalSolution::physical_x(int i, int m_x) const noexcept {
  return length_ * space_node(i, m_x, u_bar_.basis());
}

GridField PhysicalSolution::samples(int m_t, int m_x) const {
  GridField g = to_grid(u_bar_, m_t, m_x);
  g.values *= velocity_scale();
  return g;
}

PhysicalSolution denormalize(const SpectralField& w, const PhysicalProblem& p) {
  p.validate();
  SpectralField u_bar = p.viscosity < 0.0 ? -reverse_time(w) : w;
  return PhysicalSolution(std::move(u_bar), p.period, p.length);
}

}  // namespace tpb
