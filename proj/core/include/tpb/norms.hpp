#pragma once

// Norms of the energy space and its dual, the forcing decomposition
// f = D^{1/2} g + h_x, sampled inequality constants, and the a priori bound.
//
// The energy norm is fixed as
//     ||u||^2 = ||u||_{L2}^2 + ||D^{1/2} u||_{L2}^2 + ||u_x||_{L2}^2,
// i.e. the diagonal weight w(n,m) = 1 + 2 pi |n| + (m pi)^2, and the dual
// norm is the exact dual of that choice.

#include <cstdint>
#include <span>
#include <vector>

#include "tpb/spectral_field.hpp"

namespace tpb {

struct NormReport {
  double l2 = 0.0;
  double l4 = 0.0;
  double half_dt = 0.0;  // ||D^{1/2} u||
  double dx = 0.0;       // ||u_x||
  double aniso = 0.0;    // ||u|| in H^{1/2,1}
};

double energy_weight(int n, int m) noexcept;

NormReport norm_report(const SpectralField& u);
double l2_norm(const SpectralField& u);
double half_dt_norm(const SpectralField& u);
double dx_norm(const SpectralField& u);
double aniso_norm(const SpectralField& u);
/// Quadrature on a grid padded by 2 in each direction (exact for u^4).
double l4_norm(const SpectralField& u);

/// sqrt(sum |f_{nm}|^2 / w(n,m)).
double dual_norm(const SpectralField& f);

struct ForcingDecomposition {
  SpectralField g;  // Dirichlet field, ||g||_{L2} <= eps
  SpectralField h;  // Neumann field with zero constant mode
};

/// Splits a Dirichlet dual element f into D^{1/2} g + h_x mode by mode.
/// Time-channel capacity is spent greedily on the modes with the largest
/// ratio 2 pi |n| / (m pi)^2 until ||g||_{L2} reaches eps.
ForcingDecomposition decompose_forcing(const SpectralField& f, double eps);
/// D^{1/2} g + h_x.
SpectralField reconstruct_forcing(const ForcingDecomposition& d);

/// ||u^2||_{L2} / (||u|| ||u_x||).
double gn_ratio(const SpectralField& u);

struct ProbeOptions {
  int n_t = 32;
  int n_x = 32;
  double decay = 2.0;
};

/// max of gn_ratio over explicit samples; samples with u_x = 0 are skipped.
double gn_probe(std::span<const SpectralField> samples);
/// max of gn_ratio over random_field samples: n_samples per base seed.
double gn_probe(std::span<const std::uint64_t> seeds, int n_samples,
                const ProbeOptions& options = {});
/// max of ||u||_{L4} / ||u|| over random samples.
double l4_embedding_probe(std::span<const std::uint64_t> seeds, int n_samples,
                          const ProbeOptions& options = {});

/// The i-th sample of a probe drawn from base seed `seed`.
SpectralField probe_sample(std::uint64_t seed, int index, const ProbeOptions& options);

struct AprioriTerms {
  double f_dual = 0.0;
  double r0 = 0.0;
  double eps = 0.0;
  double g_norm = 0.0;
  double h_norm = 0.0;
  double a = 0.0;
  double b = 0.0;
  double bound = 0.0;
};

/// Evaluates (b + sqrt(a + b^2))^2 with R0 = c_gn / (2 mu), eps chosen so that
/// R0 ||g|| <= 1/2 with a 0.9 safety factor.
AprioriTerms apriori_terms(const SpectralField& f, double mu, double c_gn);
double apriori_bound(const SpectralField& f, double mu, double c_gn);

struct InterpolationSides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Both sides of the Hoelder inequality between the time-alpha and space-beta
/// seminorms at interpolation parameter theta.
InterpolationSides interpolation_sides(const SpectralField& u, double alpha, double beta,
                                       double theta);
bool interpolation_check(const SpectralField& u, double alpha, double beta, double theta);

}  // namespace tpb
