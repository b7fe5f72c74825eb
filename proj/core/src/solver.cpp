#include "tpb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tpb/errors.hpp"
#include "tpb/norms.hpp"

namespace tpb {
namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd flatten(const SpectralField& u) {
  return Eigen::Map<const Eigen::VectorXcd>(u.coeffs().data(), u.size());
}

SpectralField unflatten(const Eigen::VectorXcd& v, int n_t, int n_x) {
  SpectralField u(n_t, n_x, Basis::DirichletSine);
  u.coeffs() = Eigen::Map<const Eigen::MatrixXcd>(v.data(), u.time_modes(), u.space_modes());
  return u;
}

Eigen::VectorXd inverse_weights(int n_t, int n_x) {
  Eigen::VectorXd w((2 * n_t + 1) * n_x);
  for (int m = 1; m <= n_x; ++m) {
    for (int n = -n_t; n <= n_t; ++n) w((m - 1) * (2 * n_t + 1) + n + n_t) = 1.0 / energy_weight(n, m);
  }
  return w;
}

// Right-preconditioned restarted GMRES for (L + lambda S'(m)) w = r. The
// Krylov basis lives in the dual space with inner product sum a conj(b) / w,
// so the minimized residual is the dual norm of the true residual.
LinearSolveResult gmres(const SpectralField& m, const SpectralField& r, const SolverConfig& cfg,
                        double lambda) {
  const int n_t = r.n_t();
  const int n_x = r.n_x();
  const BurgersOperator op(cfg.mu);
  const MultiplicationOperator times_m(lambda * m);
  const Eigen::VectorXd winv = inverse_weights(n_t, n_x);

  const auto dot = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return (a.array() * b.array().conjugate() * winv.array()).sum();
  };
  const auto norm = [&](const Eigen::VectorXcd& a) { return std::sqrt(std::abs(dot(a, a))); };
  const auto apply = [&](const SpectralField& w) {
    return op.apply_L(w) + d_x(times_m.apply(w));
  };
  const auto precondition = [&](const Eigen::VectorXcd& y) {
    return op.invert_L(unflatten(y, n_t, n_x));
  };

  LinearSolveResult result;
  result.w = SpectralField(n_t, n_x);
  const Eigen::VectorXcd b = flatten(r);
  const double b_norm = norm(b);
  if (b_norm == 0.0) {
    result.converged = true;
    return result;
  }
  const double target = cfg.krylov_tol * b_norm;
  Eigen::VectorXcd residual = b;
  double beta = b_norm;
  const int restart = std::max(1, cfg.krylov_restart);

  while (result.iterations < cfg.max_krylov) {
    std::vector<Eigen::VectorXcd> basis;
    basis.reserve(static_cast<std::size_t>(restart) + 1);
    basis.push_back(residual / beta);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(restart + 1, restart);
    std::vector<Complex> cs(static_cast<std::size_t>(restart));
    std::vector<Complex> sn(static_cast<std::size_t>(restart));
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(restart + 1);
    g(0) = beta;

    int k = 0;
    for (; k < restart && result.iterations < cfg.max_krylov; ++k) {
      Eigen::VectorXcd v = flatten(apply(precondition(basis[static_cast<std::size_t>(k)])));
      // Modified Gram-Schmidt with one reorthogonalization pass.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= k; ++i) {
          const Complex c = dot(v, basis[static_cast<std::size_t>(i)]);
          h(i, k) += c;
          v -= c * basis[static_cast<std::size_t>(i)];
        }
      }
      const double v_norm = norm(v);
      h(k + 1, k) = v_norm;
      basis.push_back(v_norm > 0.0 ? Eigen::VectorXcd(v / v_norm) : v);

      for (int i = 0; i < k; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const Complex upper = h(i, k);
        const Complex lower = h(i + 1, k);
        h(i, k) = std::conj(cs[iu]) * upper + std::conj(sn[iu]) * lower;
        h(i + 1, k) = -sn[iu] * upper + cs[iu] * lower;
      }
      const Complex a = h(k, k);
      const Complex c = h(k + 1, k);
      const double denom = std::sqrt(std::norm(a) + std::norm(c));
      const auto ku = static_cast<std::size_t>(k);
      if (denom == 0.0) {
        cs[ku] = 1.0;
        sn[ku] = 0.0;
      } else {
        cs[ku] = a / denom;
        sn[ku] = c / denom;
      }
      h(k, k) = std::conj(cs[ku]) * a + std::conj(sn[ku]) * c;
      h(k + 1, k) = 0.0;
      g(k + 1) = -sn[ku] * g(k);
      g(k) = std::conj(cs[ku]) * g(k);
      ++result.iterations;
      if (std::abs(g(k + 1)) <= target || v_norm == 0.0) {
        ++k;
        break;
      }
    }

    const Eigen::VectorXcd y =
        h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    Eigen::VectorXcd update = Eigen::VectorXcd::Zero(b.size());
    for (int i = 0; i < k; ++i) update += y(i) * basis[static_cast<std::size_t>(i)];
    result.w += precondition(update);

    residual = b - flatten(apply(result.w));
    beta = norm(residual);
    result.relative_residual = beta / b_norm;
    if (beta <= target) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

LinearSolveResult dense_solve(const SpectralField& m, const SpectralField& r,
                              const SolverConfig& cfg, double lambda) {
  const Eigen::MatrixXcd a = assemble_linearized(m, cfg.mu, lambda);
  const Eigen::VectorXcd b = flatten(r);
  LinearSolveResult result;
  result.dense = true;
  result.w = unflatten(a.partialPivLu().solve(b), r.n_t(), r.n_x());
  const BurgersOperator op(cfg.mu);
  const double b_norm = dual_norm(r);
  const SpectralField res = op.apply_L(result.w) + lambda * d_x(dealiased_product(m, result.w)) - r;
  result.relative_residual = b_norm == 0.0 ? 0.0 : dual_norm(res) / b_norm;
  result.converged = true;
  return result;
}

std::string lambda_string(double lambda) {
  std::ostringstream os;
  os.precision(17);
  os << lambda;
  return os.str();
}

}  // namespace

void SolverConfig::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("solver: mu must be positive");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("solver: newton_tol must be positive");
  if (max_newton < 0) throw std::invalid_argument("solver: max_newton must be >= 0");
  if (!(krylov_tol > 0.0)) throw std::invalid_argument("solver: krylov_tol must be positive");
  if (max_krylov < 1) throw std::invalid_argument("solver: max_krylov must be >= 1");
  if (homotopy_steps.size() < 2 || homotopy_steps.front() != 0.0 ||
      homotopy_steps.back() != 1.0) {
    throw std::invalid_argument("solver: homotopy_steps must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < homotopy_steps.size(); ++i) {
    if (!(homotopy_steps[i] > homotopy_steps[i - 1])) {
      throw std::invalid_argument("solver: homotopy_steps must be strictly increasing");
    }
  }
}

SpectralField solve_linear(const SpectralField& f, const SolverConfig& cfg) {
  return BurgersOperator(cfg.mu).invert_L(f);
}

Eigen::MatrixXcd assemble_linearized(const SpectralField& m, double mu, double lambda) {
  if (m.basis() != Basis::DirichletSine) {
    throw BasisMismatchError("assemble_linearized: expected a Dirichlet-sine field");
  }
  const int n_t = m.n_t();
  const int n_x = m.n_x();
  const int rows = 2 * n_t + 1;
  const Eigen::Index dim = static_cast<Eigen::Index>(rows) * n_x;
  const LinearSymbol symbol(mu);
  const auto index = [&](int n, int k) { return static_cast<Eigen::Index>(k - 1) * rows + n + n_t; };
  const auto coeff = [&](int n, int j) -> Complex {
    return (j >= 1 && j <= n_x) ? m(n, j) : Complex(0.0);
  };

  // (m w) projected on sqrt(2) cos(k pi x) uses
  //   int_0^1 2 sin(j pi x) sin(l pi x) sqrt(2) cos(k pi x) dx
  //     = (delta_{|j-l|,k} - delta_{j+l,k}) / sqrt(2),
  // and the derivative maps cosine mode k to -k pi times sine mode k.
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 1; k <= n_x; ++k) {
    const double scale = -lambda * k * kPi / std::numbers::sqrt2;
    for (int n = -n_t; n <= n_t; ++n) {
      const Eigen::Index row = index(n, k);
      a(row, row) += symbol(n, k);
      if (lambda == 0.0) continue;
      for (int np = std::max(-n_t, n - n_t); np <= std::min(n_t, n + n_t); ++np) {
        const int dn = n - np;
        for (int l = 1; l <= n_x; ++l) {
          const Complex s = coeff(dn, l + k) + coeff(dn, l - k) - coeff(dn, k - l);
          if (s != Complex(0.0)) a(row, index(np, l)) += scale * s;
        }
      }
    }
  }
  return a;
}

LinearSolveResult try_solve_linearized(const SpectralField& m, const SpectralField& r,
                                       const SolverConfig& cfg, double lambda) {
  if (!m.same_shape(r) || r.basis() != Basis::DirichletSine) {
    throw BasisMismatchError("solve_linearized: m and r must be Dirichlet fields of equal size");
  }
  const long total = static_cast<long>(r.time_modes()) * r.space_modes();
  if (total < cfg.dense_threshold) return dense_solve(m, r, cfg, lambda);
  return gmres(m, r, cfg, lambda);
}

SpectralField solve_linearized(const SpectralField& m, const SpectralField& r,
                               const SolverConfig& cfg, double lambda) {
  LinearSolveResult result = try_solve_linearized(m, r, cfg, lambda);
  if (!result.converged) {
    std::ostringstream os;
    os << "linearized solve: Krylov residual " << result.relative_residual << " after "
       << result.iterations << " iterations (target " << cfg.krylov_tol << ")";
    throw NoConvergenceError(os.str(), result.relative_residual, result.iterations);
  }
  return std::move(result.w);
}

double energy_gap(const SpectralField& u, const SpectralField& f, double mu) {
  const double dx = dx_norm(u);
  const double work = pairing(f, u);
  return std::abs(mu * dx * dx - work) / std::max(1.0, std::abs(work));
}

SolveReport newton_solve(const SpectralField& f, const SpectralField& u0,
                         const SolverConfig& cfg, double lambda) {
  cfg.validate();
  if (!f.same_shape(u0)) throw BasisMismatchError("newton_solve: f and u0 differ in shape");
  const BurgersOperator op(cfg.mu);

  SolveReport report;
  report.u = u0;
  SpectralField residual = op.apply_T(report.u, lambda) - f;
  double res = dual_norm(residual);
  report.residual_history.push_back(res);

  while (res > cfg.newton_tol && report.newton_iters < cfg.max_newton) {
    const LinearSolveResult step = try_solve_linearized(report.u, residual, cfg, lambda);
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= cfg.max_halvings; ++halving, alpha *= 0.5) {
      SpectralField trial = report.u - alpha * step.w;
      SpectralField trial_residual = op.apply_T(trial, lambda) - f;
      const double trial_res = dual_norm(trial_residual);
      if (trial_res < res) {
        report.u = std::move(trial);
        residual = std::move(trial_residual);
        res = trial_res;
        accepted = true;
        break;
      }
    }
    ++report.newton_iters;
    report.residual_history.push_back(res);
    if (!accepted) break;
  }

  report.u.enforce_hermitian();
  residual = op.apply_T(report.u, lambda) - f;
  report.residual_dual = dual_norm(residual);
  report.converged = report.residual_dual <= cfg.newton_tol;
  report.energy_gap = energy_gap(report.u, f, cfg.mu);
  if (cfg.c_gn > 0.0) {
    report.apriori_bound = apriori_bound(f, cfg.mu, cfg.c_gn);
    report.apriori_margin = *report.apriori_bound - aniso_norm(report.u);
  }
  return report;
}

SolveReport homotopy_solve(const SpectralField& f, const SolverConfig& cfg) {
  cfg.validate();
  const std::optional<double> bound =
      cfg.c_gn > 0.0 ? std::optional<double>(apriori_bound(f, cfg.mu, cfg.c_gn)) : std::nullopt;
  const BurgersOperator op(cfg.mu);

  std::vector<LambdaStep> path;
  SpectralField u = solve_linear(f, cfg);
  path.push_back({0.0, dual_norm(op.apply_L(u) - f), aniso_norm(u), 0, bound});

  SolveReport last;
  last.u = u;
  last.converged = true;
  last.residual_dual = path.back().residual;

  constexpr int kMaxBisections = 12;
  double current = 0.0;
  for (std::size_t i = 1; i < cfg.homotopy_steps.size(); ++i) {
    const double target = cfg.homotopy_steps[i];
    int depth = 0;
    while (current < target) {
      double next = target;
      SolveReport attempt;
      for (;;) {
        attempt = newton_solve(f, u, cfg, next);
        if (attempt.converged) break;
        if (++depth > kMaxBisections) {
          throw ContinuationError("homotopy: Newton failed to reach lambda = " +
                                      lambda_string(next) + " from lambda = " +
                                      lambda_string(current),
                                  next);
        }
        next = 0.5 * (current + next);
      }
      u = attempt.u;
      current = next;
      path.push_back({current, attempt.residual_dual, aniso_norm(u), attempt.newton_iters, bound});
      last = std::move(attempt);
    }
  }

  last.lambda_path = std::move(path);
  last.apriori_bound = bound;
  if (bound) {
    double margin = *bound;
    bool first = true;
    for (const LambdaStep& s : last.lambda_path) {
      const double m = *bound - s.norm;
      margin = first ? m : std::min(margin, m);
      first = false;
    }
    last.apriori_margin = margin;
  }
  return last;
}

}  // namespace tpb
