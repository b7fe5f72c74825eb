#pragma once

// Difference sets of the Burgers problem around a fixed background field v
// and the maps between them:
//
//   S1: T(w) + (v w)_x = 0                               (Dirichlet w)
//   S2: W_t - mu W_xx + W_x^2 / 2 + v W_x = K            (cosine W, mod constants)
//   S3: phi_t - mu phi_xx + v phi_x + K phi = 0          (cosine phi > 0, mod scaling)
//
// together with the period map of psi_t - mu psi_xx + v psi_x = 0 under
// Neumann conditions and its leading eigenpair.

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "tpb/solver.hpp"
#include "tpb/spectral_field.hpp"

namespace tpb {

enum class SetKind { S1, S2, S3 };

const char* to_string(SetKind kind) noexcept;

struct ColeHopfElement {
  SetKind kind = SetKind::S1;
  SpectralField w;    // S1
  SpectralField W;    // S2, zero space-time mean
  SpectralField phi;  // S3, grid maximum 1
  double K = 0.0;     // S2 and S3
  SpectralField v;    // background field
};

/// Cosine-series antiderivative with value 0 at x = 0.
SpectralField antiderivative_x(const SpectralField& w);

/// T(w) + (v w)_x as a dual element.
SpectralField s1_residual(const SpectralField& w, const SpectralField& v, double mu);
/// W_t - mu W_xx + W_x^2 / 2 + v W_x - K as a cosine field.
SpectralField s2_residual(const SpectralField& W, const SpectralField& v, double mu, double K);
/// phi_t - mu phi_xx + v phi_x + K phi as a cosine field.
SpectralField s3_residual(const SpectralField& phi, const SpectralField& v, double mu, double K);

/// Builds the S2 element of a difference w in S1. The x-dependent part of
/// the S2 residual of the antiderivative must stay below membership_tol
/// (relative); pass infinity to skip the check. Throws NotInS1Error.
ColeHopfElement lift_s1_to_s2(const SpectralField& w, const SpectralField& v, double mu,
                              double membership_tol = 1e-8);

/// w = W_x.
ColeHopfElement project_s2_to_s1(const ColeHopfElement& e);

/// phi = exp(-W / (2 mu)) with K' = K / (2 mu), normalized to grid maximum 1.
/// Throws ProjectionAccuracyError when the re-projected phi violates the
/// chain-rule identity by more than accuracy_tol (relative).
ColeHopfElement s2_to_s3(const ColeHopfElement& e, double mu, double accuracy_tol = 1e-6);

/// Relative size of phi_t - mu phi_xx + v phi_x + K phi / (2 mu) + r phi / (2 mu),
/// r the S2 residual of W; zero when phi = exp(-W / (2 mu)) exactly.
double chain_rule_defect(const SpectralField& W, const SpectralField& phi, const SpectralField& v,
                         double mu, double K);

/// W = -2 mu log(phi), zero mean, K = 2 mu K'. Throws NonPositiveError.
ColeHopfElement s3_to_s2(const ColeHopfElement& e, double mu);

/// Cosine coefficients c_0..c_N of a Neumann profile in x.
struct SpaceProfile {
  Eigen::VectorXd c;

  int n_modes() const noexcept { return static_cast<int>(c.size()) - 1; }
  /// Values at x_i = i / (m_x - 1), i = 0..m_x-1.
  Eigen::VectorXd values(int m_x) const;
  static SpaceProfile constant(int n_modes, double value = 1.0);
};

/// Crank-Nicolson period map in the cosine Galerkin basis, coefficients
/// frozen at step midpoints. Each call also runs steps / 2 and throws
/// StepCountError if the two differ by more than 1e-4 relative.
SpaceProfile evolve_period_map(const SpectralField& v, const SpaceProfile& psi0, double mu,
                               int steps = 512);

/// Matrix of the discrete period map on n_modes + 1 cosine coefficients
/// (no step-count diagnostic).
Eigen::MatrixXd period_map_matrix(const SpectralField& v, int n_modes, double mu,
                                  int steps = 512);

struct MonodromyResult {
  double rho = 0.0;
  SpaceProfile eigfun;  // grid maximum 1
  double flatness = 0.0;  // (max - min) / max on the grid
  int iterations = 0;
};

/// Power iteration on the period map from a perturbed constant profile.
/// n_modes = 0 picks max(2 n_x, 16). Throws NoConvergenceError, and
/// StepCountError if the eigenfunction moves by more than 1e-4 under
/// steps / 2.
MonodromyResult monodromy_leading_pair(const SpectralField& v, double mu, int steps = 512,
                                       int power_iters = 2000, int n_modes = 0);

struct UniquenessReport {
  std::vector<SpectralField> solutions;
  std::vector<double> residuals;
  std::vector<bool> converged;
  double max_distance = 0.0;      // pairwise L2
  double max_s1_residual = 0.0;   // dual norm of T(w) + (v w)_x, w = u_i - u_j
  bool unique = false;
};

/// The i-th Newton start: 0, L^{-1} f, then scaled random fields.
SpectralField uniqueness_start(const SpectralField& f, const SolverConfig& cfg, int index);

/// Newton from n_starts starts; unique iff all converge and every pairwise
/// distance is at most distance_tol.
UniquenessReport verify_uniqueness(const SpectralField& f, const SolverConfig& cfg, int n_starts,
                                   double distance_tol = 1e-6);

}  // namespace tpb
