#include "tpb/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tpb/errors.hpp"
#include "tpb/operators.hpp"

namespace tpb {
namespace {

constexpr double kPi = std::numbers::pi;

template <class Weight>
double weighted_sum(const SpectralField& u, Weight weight) {
  double sum = 0.0;
  for (int m = u.first_mode(); m <= u.n_x(); ++m) {
    for (int n = -u.n_t(); n <= u.n_t(); ++n) sum += weight(n, m) * std::norm(u(n, m));
  }
  return sum;
}

void require_dirichlet(const SpectralField& u, const char* what) {
  if (u.basis() != Basis::DirichletSine) {
    throw BasisMismatchError(std::string(what) + ": expected a Dirichlet-sine field");
  }
}

}  // namespace

double energy_weight(int n, int m) noexcept {
  return 1.0 + 2.0 * kPi * std::abs(n) + (m * kPi) * (m * kPi);
}

double l2_norm(const SpectralField& u) { return std::sqrt(u.coeffs().squaredNorm()); }

double half_dt_norm(const SpectralField& u) {
  return std::sqrt(weighted_sum(u, [](int n, int) { return 2.0 * kPi * std::abs(n); }));
}

double dx_norm(const SpectralField& u) {
  return std::sqrt(weighted_sum(u, [](int, int m) { return (m * kPi) * (m * kPi); }));
}

double aniso_norm(const SpectralField& u) { return std::sqrt(weighted_sum(u, energy_weight)); }

double l4_norm(const SpectralField& u) {
  const int m_t = 4 * u.n_t() + 1;
  const int m_x = u.basis() == Basis::DirichletSine ? 2 * u.n_x() : 2 * u.n_x() + 2;
  const GridField g = to_grid(u, m_t, m_x);
  // Dirichlet grids omit the end points, where u vanishes; cosine grids
  // include them with half weight.
  const int intervals = u.basis() == Basis::DirichletSine ? m_x + 1 : m_x - 1;
  const Eigen::ArrayXXd p4 = g.values.array().square().square();
  double sum = p4.sum();
  if (u.basis() == Basis::NeumannCosine) {
    sum -= 0.5 * (p4.col(0).sum() + p4.col(m_x - 1).sum());
  }
  return std::pow(sum / (static_cast<double>(m_t) * intervals), 0.25);
}

NormReport norm_report(const SpectralField& u) {
  require_dirichlet(u, "norm_report");
  NormReport r;
  r.l2 = l2_norm(u);
  r.half_dt = half_dt_norm(u);
  r.dx = dx_norm(u);
  r.aniso = std::sqrt(r.l2 * r.l2 + r.half_dt * r.half_dt + r.dx * r.dx);
  r.l4 = l4_norm(u);
  return r;
}

double dual_norm(const SpectralField& f) {
  return std::sqrt(weighted_sum(f, [](int n, int m) { return 1.0 / energy_weight(n, m); }));
}

ForcingDecomposition decompose_forcing(const SpectralField& f, double eps) {
  require_dirichlet(f, "decompose_forcing");
  if (!(eps > 0.0)) throw std::invalid_argument("decompose_forcing: eps must be positive");

  struct Candidate {
    int n;
    int m;
    double ratio;
    double cost;  // ||g||^2 contributed by the (n, -n) pair if fully assigned
  };
  std::vector<Candidate> candidates;
  for (int n = 1; n <= f.n_t(); ++n) {
    for (int m = 1; m <= f.n_x(); ++m) {
      const double mag2 = std::norm(f(n, m));
      if (mag2 == 0.0) continue;
      candidates.push_back({n, m, 2.0 * kPi * n / ((m * kPi) * (m * kPi)),
                            2.0 * mag2 / (2.0 * kPi * n)});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.ratio > b.ratio; });

  const TimeMultiplier half = TimeMultiplier::fractional(0.5);
  SpectralField g(f.n_t(), f.n_x(), Basis::DirichletSine);
  SpectralField time_part(f.n_t(), f.n_x(), Basis::DirichletSine);
  double budget = eps * eps * (1.0 - 1e-12);
  for (const Candidate& c : candidates) {
    if (budget <= 0.0) break;
    const double share = c.cost <= budget ? 1.0 : std::sqrt(budget / c.cost);
    budget -= share * share * c.cost;
    const Complex fc = share * f(c.n, c.m);
    g.set_mode(c.n, c.m, fc / half(c.n));
    time_part.set_mode(c.n, c.m, fc);
  }

  // h_x = f - D^{1/2} g, and d_x maps cosine mode m to -m pi times sine mode m.
  const SpectralField space_part = f - time_part;
  SpectralField h(f.n_t(), f.n_x(), Basis::NeumannCosine);
  for (int m = 1; m <= f.n_x(); ++m) h.coeffs().col(m) = space_part.coeffs().col(m - 1) / (-m * kPi);
  return {std::move(g), std::move(h)};
}

SpectralField reconstruct_forcing(const ForcingDecomposition& d) {
  return half_derivative(d.g) + d_x(d.h);
}

double gn_ratio(const SpectralField& u) {
  const NormReport r = norm_report(u);
  if (r.dx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return r.l4 * r.l4 / (r.aniso * r.dx);
}

double gn_probe(std::span<const SpectralField> samples) {
  double best = -1.0;
  for (const SpectralField& u : samples) {
    const double ratio = gn_ratio(u);
    if (std::isnan(ratio)) continue;
    best = std::max(best, ratio);
  }
  if (best < 0.0) throw DegenerateSampleError("gn_probe: every sample has u_x = 0");
  return best;
}

SpectralField probe_sample(std::uint64_t seed, int index, const ProbeOptions& options) {
  const std::uint64_t mixed = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(index);
  return random_field(mixed, options.n_t, options.n_x, options.decay);
}

double gn_probe(std::span<const std::uint64_t> seeds, int n_samples,
                const ProbeOptions& options) {
  if (n_samples < 1) throw std::invalid_argument("gn_probe: n_samples must be >= 1");
  std::vector<SpectralField> samples;
  samples.reserve(seeds.size() * static_cast<std::size_t>(n_samples));
  for (std::uint64_t seed : seeds) {
    for (int i = 0; i < n_samples; ++i) samples.push_back(probe_sample(seed, i, options));
  }
  return gn_probe(samples);
}

double l4_embedding_probe(std::span<const std::uint64_t> seeds, int n_samples,
                          const ProbeOptions& options) {
  if (n_samples < 1) throw std::invalid_argument("l4_embedding_probe: n_samples must be >= 1");
  double best = 0.0;
  for (std::uint64_t seed : seeds) {
    for (int i = 0; i < n_samples; ++i) {
      const NormReport r = norm_report(probe_sample(seed, i, options));
      if (r.aniso > 0.0) best = std::max(best, r.l4 / r.aniso);
    }
  }
  return best;
}

AprioriTerms apriori_terms(const SpectralField& f, double mu, double c_gn) {
  if (!(mu > 0.0)) throw std::invalid_argument("apriori_bound: mu must be positive");
  if (!(c_gn > 0.0)) throw std::invalid_argument("apriori_bound: c_gn must be positive");
  AprioriTerms t;
  t.f_dual = dual_norm(f);
  t.r0 = c_gn / (2.0 * mu);
  t.eps = 0.9 * std::min(1.0, 1.0 / (2.0 * t.r0));
  const ForcingDecomposition d = decompose_forcing(f, t.eps);
  t.g_norm = l2_norm(d.g);
  t.h_norm = l2_norm(d.h);
  t.a = 2.0 * (1.0 + 1.0 / mu) * t.f_dual;
  t.b = t.r0 * t.h_norm * std::sqrt(t.f_dual / mu);
  const double root = t.b + std::sqrt(t.a + t.b * t.b);
  t.bound = root * root;
  return t;
}

double apriori_bound(const SpectralField& f, double mu, double c_gn) {
  return apriori_terms(f, mu, c_gn).bound;
}

InterpolationSides interpolation_sides(const SpectralField& u, double alpha, double beta,
                                       double theta) {
  if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("interpolation: negative order");
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("interpolation: theta not in [0,1]");
  double lhs = 0.0;
  double time_sum = 0.0;
  double space_sum = 0.0;
  for (int m = u.first_mode(); m <= u.n_x(); ++m) {
    const double km = m * kPi;
    for (int n = -u.n_t(); n <= u.n_t(); ++n) {
      const double kn = 2.0 * kPi * std::abs(n);
      const double mag2 = std::norm(u(n, m));
      lhs += std::pow(kn, 2.0 * alpha * (1.0 - theta)) * std::pow(km, 2.0 * beta * theta) * mag2;
      time_sum += std::pow(kn, 2.0 * alpha) * mag2;
      space_sum += std::pow(km, 2.0 * beta) * mag2;
    }
  }
  InterpolationSides s;
  s.lhs = lhs;
  s.rhs = std::pow(time_sum, 1.0 - theta) * std::pow(space_sum, theta);
  s.holds = s.lhs <= s.rhs * (1.0 + 1e-12) + std::numeric_limits<double>::min();
  return s;
}

bool interpolation_check(const SpectralField& u, double alpha, double beta, double theta) {
  return interpolation_sides(u, alpha, beta, theta).holds;
}

}  // namespace tpb
