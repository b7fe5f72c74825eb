#include "tpb/colehopf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tpb/errors.hpp"
#include "tpb/norms.hpp"
#include "tpb/operators.hpp"

namespace tpb {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStepDriftLimit = 1e-4;

void require(bool ok, const char* what) {
  if (!ok) throw BasisMismatchError(what);
}

// Padded grid for pointwise exp/log of cosine fields.
int padded_time(const SpectralField& u) { return 4 * u.n_t() + 2; }
int padded_space(const SpectralField& u) { return 2 * u.n_x() + 3; }

// G[j](k, l): cosine coefficient k of sqrt(2) sin(j pi x) * d/dx of the
// cosine basis function l, i.e. -l pi int 2 sin(j pi x) sin(l pi x) phi_k.
std::vector<Eigen::MatrixXd> advection_tables(int n_x, int n_modes) {
  std::vector<Eigen::MatrixXd> tables;
  tables.reserve(static_cast<std::size_t>(n_x));
  for (int j = 1; j <= n_x; ++j) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n_modes + 1, n_modes + 1);
    for (int l = 1; l <= n_modes; ++l) {
      const double dl = -l * kPi;
      if (j == l) g(0, l) += dl;
      for (int k = 1; k <= n_modes; ++k) {
        double c = 0.0;
        if (std::abs(j - l) == k) c += 1.0;
        if (j + l == k) c -= 1.0;
        if (c != 0.0) g(k, l) += dl * c / std::numbers::sqrt2;
      }
    }
    tables.push_back(std::move(g));
  }
  return tables;
}

// Real sine coefficients of v(t, .) at time t.
Eigen::VectorXd space_coefficients(const SpectralField& v, double t) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.n_x());
  for (int m = 1; m <= v.n_x(); ++m) {
    double s = v(0, m).real();
    for (int n = 1; n <= v.n_t(); ++n) {
      s += 2.0 * (v(n, m) * std::polar(1.0, 2.0 * kPi * n * t)).real();
    }
    out(m - 1) = s;
  }
  return out;
}

// Applies the period map to the columns of x.
Eigen::MatrixXd evolve_block(const SpectralField& v, Eigen::MatrixXd x, double mu, int steps) {
  const int n_modes = static_cast<int>(x.rows()) - 1;
  const std::vector<Eigen::MatrixXd> tables = advection_tables(v.n_x(), n_modes);
  Eigen::VectorXd diffusion(n_modes + 1);
  for (int k = 0; k <= n_modes; ++k) diffusion(k) = -mu * (k * kPi) * (k * kPi);

  const double dt = 1.0 / steps;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n_modes + 1, n_modes + 1);
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd vc = space_coefficients(v, (s + 0.5) * dt);
    Eigen::MatrixXd a = diffusion.asDiagonal();
    for (int j = 0; j < v.n_x(); ++j) {
      if (vc(j) != 0.0) a.noalias() -= vc(j) * tables[static_cast<std::size_t>(j)];
    }
    const Eigen::MatrixXd rhs = (identity + 0.5 * dt * a) * x;
    x = (identity - 0.5 * dt * a).partialPivLu().solve(rhs);
  }
  return x;
}

double relative_drift(const Eigen::MatrixXd& fine, const Eigen::MatrixXd& coarse) {
  return (fine - coarse).cwiseAbs().maxCoeff() / std::max(1.0, fine.cwiseAbs().maxCoeff());
}

void check_period_inputs(const SpectralField& v, double mu, int steps) {
  require(v.basis() == Basis::DirichletSine, "period map: v must be a Dirichlet-sine field");
  if (!(mu > 0.0)) throw std::invalid_argument("period map: mu must be positive");
  if (steps < 1) throw std::invalid_argument("period map: steps must be >= 1");
}

Eigen::MatrixXd checked_evolve(const SpectralField& v, const Eigen::MatrixXd& x, double mu,
                               int steps) {
  Eigen::MatrixXd fine = evolve_block(v, x, mu, steps);
  if (steps >= 2) {
    const double drift = relative_drift(fine, evolve_block(v, x, mu, steps / 2));
    if (drift > kStepDriftLimit) {
      std::ostringstream os;
      os << "period map: " << steps << " steps drift by " << drift << " against " << steps / 2;
      throw StepCountError(os.str(), drift);
    }
  }
  return fine;
}

double l2_of_cosine_modes(const SpectralField& u, int from) {
  return std::sqrt(u.coeffs().rightCols(u.space_modes() - from).squaredNorm());
}

}  // namespace

const char* to_string(SetKind kind) noexcept {
  switch (kind) {
    case SetKind::S1:
      return "S1";
    case SetKind::S2:
      return "S2";
    case SetKind::S3:
      return "S3";
  }
  return "?";
}

SpectralField antiderivative_x(const SpectralField& w) {
  require(w.basis() == Basis::DirichletSine, "antiderivative_x: expected a Dirichlet-sine field");
  SpectralField out(w.n_t(), w.n_x(), Basis::NeumannCosine);
  for (int m = 1; m <= w.n_x(); ++m) {
    const double km = m * kPi;
    out.coeffs().col(0) += (std::numbers::sqrt2 / km) * w.coeffs().col(m - 1);
    out.coeffs().col(m) = (-1.0 / km) * w.coeffs().col(m - 1);
  }
  return out;
}

SpectralField s1_residual(const SpectralField& w, const SpectralField& v, double mu) {
  return BurgersOperator(mu).apply_T(w) + d_x(dealiased_product(v, w));
}

SpectralField s2_residual(const SpectralField& W, const SpectralField& v, double mu, double K) {
  require(W.basis() == Basis::NeumannCosine, "s2_residual: W must be a cosine field");
  const SpectralField wx = d_x(W);
  SpectralField r = d_t(W) - mu * d_xx(W) + 0.5 * dealiased_product(wx, wx) +
                    dealiased_product(v, wx);
  r(0, 0) -= K;
  return r;
}

SpectralField s3_residual(const SpectralField& phi, const SpectralField& v, double mu, double K) {
  require(phi.basis() == Basis::NeumannCosine, "s3_residual: phi must be a cosine field");
  return d_t(phi) - mu * d_xx(phi) + dealiased_product(v, d_x(phi)) + K * phi;
}

ColeHopfElement lift_s1_to_s2(const SpectralField& w, const SpectralField& v, double mu,
                              double membership_tol) {
  if (!(mu > 0.0)) throw std::invalid_argument("lift_s1_to_s2: mu must be positive");
  require(w.same_shape(v), "lift_s1_to_s2: w and v must be Dirichlet fields of equal size");
  const SpectralField bar = antiderivative_x(w);
  const SpectralField e = s2_residual(bar, v, mu, 0.0);

  const double x_part = l2_of_cosine_modes(e, 1);
  const double scale = std::max(1.0, l2_norm(bar));
  if (x_part > membership_tol * scale) {
    std::ostringstream os;
    os << "lift_s1_to_s2: x-dependent residual " << x_part / scale << " exceeds "
       << membership_tol;
    throw NotInS1Error(os.str(), x_part / scale);
  }

  // The remaining residual is g(t); K is its mean and h' = g - K.
  ColeHopfElement out;
  out.kind = SetKind::S2;
  out.K = e(0, 0).real();
  out.W = bar;
  for (int n = 1; n <= w.n_t(); ++n) {
    out.W.set_mode(n, 0, bar(n, 0) - e(n, 0) / Complex(0.0, 2.0 * kPi * n));
  }
  out.W(0, 0) = 0.0;
  out.v = v;
  return out;
}

ColeHopfElement project_s2_to_s1(const ColeHopfElement& e) {
  if (e.kind != SetKind::S2) throw std::invalid_argument("project_s2_to_s1: expected an S2 element");
  ColeHopfElement out;
  out.kind = SetKind::S1;
  out.w = d_x(e.W);
  out.v = e.v;
  return out;
}

ColeHopfElement s2_to_s3(const ColeHopfElement& e, double mu, double accuracy_tol) {
  if (e.kind != SetKind::S2) throw std::invalid_argument("s2_to_s3: expected an S2 element");
  if (!(mu > 0.0)) throw std::invalid_argument("s2_to_s3: mu must be positive");
  const SpectralField& W = e.W;
  GridField g = to_grid(W, padded_time(W), padded_space(W));
  g.values = (g.values.array() * (-1.0 / (2.0 * mu))).exp();
  g.values /= g.values.maxCoeff();

  ColeHopfElement out;
  out.kind = SetKind::S3;
  out.phi = to_spectral(g, W.n_t(), W.n_x(), Basis::NeumannCosine);
  out.K = e.K / (2.0 * mu);
  out.v = e.v;

  const double rel = chain_rule_defect(W, out.phi, e.v, mu, e.K);
  if (!(rel <= accuracy_tol)) {
    std::ostringstream os;
    os << "s2_to_s3: re-projected exp(-W/2mu) misses its equation by " << rel << " (tolerance "
       << accuracy_tol << ")";
    throw ProjectionAccuracyError(os.str(), rel);
  }
  return out;
}

double chain_rule_defect(const SpectralField& W, const SpectralField& phi, const SpectralField& v,
                         double mu, double K) {
  const SpectralField r = s2_residual(W, v, mu, K);
  const SpectralField defect =
      s3_residual(phi, v, mu, K / (2.0 * mu)) + (1.0 / (2.0 * mu)) * dealiased_product(r, phi);
  const double scale =
      std::max(l2_norm(phi), l2_norm(d_t(phi)) + mu * l2_norm(d_xx(phi)));
  return scale == 0.0 ? l2_norm(defect) : l2_norm(defect) / scale;
}

ColeHopfElement s3_to_s2(const ColeHopfElement& e, double mu) {
  if (e.kind != SetKind::S3) throw std::invalid_argument("s3_to_s2: expected an S3 element");
  if (!(mu > 0.0)) throw std::invalid_argument("s3_to_s2: mu must be positive");
  const SpectralField& phi = e.phi;
  GridField g = to_grid(phi, padded_time(phi), padded_space(phi));
  const double minimum = g.values.minCoeff();
  if (!(minimum > 0.0)) {
    std::ostringstream os;
    os << "s3_to_s2: phi is not strictly positive (grid minimum " << minimum << ")";
    throw NonPositiveError(os.str(), minimum);
  }
  g.values = -2.0 * mu * g.values.array().log();

  ColeHopfElement out;
  out.kind = SetKind::S2;
  out.W = to_spectral(g, phi.n_t(), phi.n_x(), Basis::NeumannCosine);
  out.W(0, 0) = 0.0;
  out.K = 2.0 * mu * e.K;
  out.v = e.v;
  return out;
}

Eigen::VectorXd SpaceProfile::values(int m_x) const {
  if (m_x < 2) throw ResolutionError("SpaceProfile::values: need at least 2 nodes");
  Eigen::VectorXd out(m_x);
  for (int i = 0; i < m_x; ++i) {
    const double x = static_cast<double>(i) / (m_x - 1);
    double s = c.size() > 0 ? c(0) : 0.0;
    for (int k = 1; k < c.size(); ++k) s += c(k) * std::numbers::sqrt2 * std::cos(k * kPi * x);
    out(i) = s;
  }
  return out;
}

SpaceProfile SpaceProfile::constant(int n_modes, double value) {
  SpaceProfile p;
  p.c = Eigen::VectorXd::Zero(n_modes + 1);
  p.c(0) = value;
  return p;
}

SpaceProfile evolve_period_map(const SpectralField& v, const SpaceProfile& psi0, double mu,
                               int steps) {
  check_period_inputs(v, mu, steps);
  SpaceProfile out;
  out.c = checked_evolve(v, psi0.c, mu, steps).col(0);
  return out;
}

Eigen::MatrixXd period_map_matrix(const SpectralField& v, int n_modes, double mu, int steps) {
  check_period_inputs(v, mu, steps);
  if (n_modes < 0) throw std::invalid_argument("period_map_matrix: n_modes must be >= 0");
  return evolve_block(v, Eigen::MatrixXd::Identity(n_modes + 1, n_modes + 1), mu, steps);
}

MonodromyResult monodromy_leading_pair(const SpectralField& v, double mu, int steps,
                                       int power_iters, int n_modes) {
  if (n_modes <= 0) n_modes = std::max(2 * v.n_x(), 16);
  const Eigen::MatrixXd map = period_map_matrix(v, n_modes, mu, steps);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_modes + 1);
  x(0) = 1.0;
  x(1) = 0.1;
  x /= x.norm();
  MonodromyResult result;
  double rho = 0.0;
  bool converged = false;
  for (int it = 1; it <= power_iters; ++it) {
    const Eigen::VectorXd y = map * x;
    const double next = x.dot(y);
    const double size = y.norm();
    if (size == 0.0) throw NoConvergenceError("monodromy: period map annihilated the iterate", 0.0, it);
    const Eigen::VectorXd x_next = y / size;
    const double change = (x_next - x).norm();
    x = x_next;
    result.iterations = it;
    if (it > 1 && std::abs(next - rho) <= 1e-15 * std::abs(next) && change <= 1e-13) {
      rho = next;
      converged = true;
      break;
    }
    rho = next;
  }
  if (!converged) {
    throw NoConvergenceError("monodromy: power iteration did not converge", rho,
                             result.iterations);
  }

  // Stiff unresolved modes are barely damped by Crank-Nicolson, so the
  // halving test is applied to the eigenfunction rather than the whole map.
  if (steps >= 2) {
    const Eigen::MatrixXd coarse = period_map_matrix(v, n_modes, mu, steps / 2);
    const double drift = relative_drift(map * x, coarse * x);
    if (drift > kStepDriftLimit) {
      std::ostringstream os;
      os << "monodromy: " << steps << " steps drift by " << drift << " against " << steps / 2;
      throw StepCountError(os.str(), drift);
    }
  }

  result.rho = rho;
  const int m_x = 4 * n_modes + 1;
  Eigen::VectorXd vals = SpaceProfile{x}.values(m_x);
  const double peak = vals.maxCoeff() >= -vals.minCoeff() ? vals.maxCoeff() : vals.minCoeff();
  result.eigfun.c = x / peak;
  vals /= peak;
  result.flatness = (vals.maxCoeff() - vals.minCoeff()) / vals.maxCoeff();
  return result;
}

SpectralField uniqueness_start(const SpectralField& f, const SolverConfig& cfg, int index) {
  if (index == 0) return SpectralField(f.n_t(), f.n_x());
  if (index == 1) return solve_linear(f, cfg);
  return 0.1 * random_field(static_cast<std::uint64_t>(7 + index - 2), f.n_t(), f.n_x(), 2.0);
}

UniquenessReport verify_uniqueness(const SpectralField& f, const SolverConfig& cfg, int n_starts,
                                   double distance_tol) {
  if (n_starts < 2) throw std::invalid_argument("verify_uniqueness: n_starts must be >= 2");
  UniquenessReport report;
  for (int i = 0; i < n_starts; ++i) {
    SolveReport r = newton_solve(f, uniqueness_start(f, cfg, i), cfg);
    report.converged.push_back(r.converged);
    report.residuals.push_back(r.residual_dual);
    report.solutions.push_back(std::move(r.u));
  }
  for (std::size_t i = 0; i < report.solutions.size(); ++i) {
    for (std::size_t j = i + 1; j < report.solutions.size(); ++j) {
      const SpectralField w = report.solutions[i] - report.solutions[j];
      report.max_distance = std::max(report.max_distance, l2_norm(w));
      report.max_s1_residual = std::max(
          report.max_s1_residual, dual_norm(s1_residual(w, report.solutions[j], cfg.mu)));
    }
  }
  report.unique = std::all_of(report.converged.begin(), report.converged.end(),
                              [](bool c) { return c; }) &&
                  report.max_distance <= distance_tol;
  return report;
}

}  // namespace tpb
