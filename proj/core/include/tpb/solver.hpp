#pragma once

// Newton iteration for T_lambda(u) = L u + lambda S(u) = f with
// L^{-1}-preconditioned linearized solves and continuation in lambda.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tpb/operators.hpp"
#include "tpb/spectral_field.hpp"

namespace tpb {

struct SolverConfig {
  double mu = 1.0;
  double newton_tol = 1e-10;  // dual-norm residual
  int max_newton = 50;
  int max_halvings = 20;
  std::vector<double> homotopy_steps{0.0, 0.25, 0.5, 0.75, 1.0};
  double krylov_tol = 1e-12;  // relative, dual norm
  int max_krylov = 600;
  int krylov_restart = 120;
  int dense_threshold = 2000;  // total modes below which T'(m) is assembled
  double c_gn = 0.0;           // GN constant for a priori comparisons; 0 disables

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct LambdaStep {
  double lambda = 0.0;
  double residual = 0.0;
  double norm = 0.0;  // ||u|| in H^{1/2,1}
  int newton_iters = 0;
  std::optional<double> bound;
};

struct SolveReport {
  SpectralField u;
  bool converged = false;
  double residual_dual = 0.0;
  int newton_iters = 0;
  std::vector<double> residual_history;
  std::vector<LambdaStep> lambda_path;
  double energy_gap = 0.0;  // |mu ||u_x||^2 - <f,u>| / max(1, |<f,u>|)
  std::optional<double> apriori_bound;
  std::optional<double> apriori_margin;  // min over the path of bound - ||u||
};

struct LinearSolveResult {
  SpectralField w;
  double relative_residual = 0.0;
  int iterations = 0;
  bool dense = false;
  bool converged = false;
};

/// Exact inverse of L.
SpectralField solve_linear(const SpectralField& f, const SolverConfig& cfg);

/// Modal matrix of w -> L w + lambda (m w)_x, assembled from closed-form
/// sine-sine-cosine integrals. Rows and columns follow the column-major
/// flattening of SpectralField::coeffs().
Eigen::MatrixXcd assemble_linearized(const SpectralField& m, double mu, double lambda = 1.0);

/// Solves L w + lambda (m w)_x = r: densely below cfg.dense_threshold total
/// modes, otherwise with right-preconditioned restarted GMRES in the dual
/// inner product. Throws NoConvergenceError when the Krylov residual stays
/// above cfg.krylov_tol.
SpectralField solve_linearized(const SpectralField& m, const SpectralField& r,
                               const SolverConfig& cfg, double lambda = 1.0);
/// Same, without throwing; reports how the solve went.
LinearSolveResult try_solve_linearized(const SpectralField& m, const SpectralField& r,
                                       const SolverConfig& cfg, double lambda = 1.0);

/// Damped Newton from u0 on T_lambda(u) = f. A non-converged run returns a
/// report with converged = false.
SolveReport newton_solve(const SpectralField& f, const SpectralField& u0,
                         const SolverConfig& cfg, double lambda = 1.0);

/// Continuation over cfg.homotopy_steps with warm starts; failed steps are
/// bisected. Throws ContinuationError naming the lambda that could not be
/// reached.
SolveReport homotopy_solve(const SpectralField& f, const SolverConfig& cfg);

/// |mu ||u_x||^2 - <f,u>| / max(1, |<f,u>|).
double energy_gap(const SpectralField& u, const SpectralField& f, double mu);

}  // namespace tpb
