#include "tpb/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "tpb/errors.hpp"

namespace tpb {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// e^{2 pi i n j / m_t} for j = 0..m_t-1 (rows) and n = -n_t..n_t (columns).
// The phase is reduced modulo m_t in integer arithmetic so that columns n
// and -n are exact conjugates.
Eigen::MatrixXcd make_time_synthesis(int n_t, int m_t) {
  Eigen::MatrixXcd e(m_t, 2 * n_t + 1);
  for (int j = 0; j < m_t; ++j) {
    for (int n = 0; n <= n_t; ++n) {
      const long r = (static_cast<long>(n) * j) % m_t;
      const double angle = 2.0 * kPi * static_cast<double>(r) / m_t;
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      e(j, n_t + n) = Complex(c, s);
      e(j, n_t - n) = Complex(c, -s);
    }
  }
  return e;
}

double basis_value(Basis basis, int m, int i, int intervals) {
  const long r = (static_cast<long>(m) * i) % (2L * intervals);
  const double angle = kPi * static_cast<double>(r) / intervals;
  if (basis == Basis::DirichletSine) return kSqrt2 * std::sin(angle);
  return m == 0 ? 1.0 : kSqrt2 * std::cos(angle);
}

// Basis values at nodes x_i = i / intervals, i = first..last (rows), for
// modes first_mode..n_x (columns).
Eigen::MatrixXd make_space_synthesis(Basis basis, int n_x, int intervals, int first,
                                     int last) {
  const int m0 = basis == Basis::DirichletSine ? 1 : 0;
  Eigen::MatrixXd b(last - first + 1, n_x + 1 - m0);
  for (int i = first; i <= last; ++i) {
    for (int m = m0; m <= n_x; ++m) b(i - first, m - m0) = basis_value(basis, m, i, intervals);
  }
  return b;
}

struct TimeTables {
  Eigen::MatrixXcd synthesis;  // m_t x (2 n_t + 1)
  Eigen::MatrixXcd analysis;   // (2 n_t + 1) x m_t, includes the 1/m_t weight
};

// Transform matrices are immutable once built and shared between threads.
class TableCache {
 public:
  std::shared_ptr<const TimeTables> time(int n_t, int m_t) {
    std::lock_guard lock(mutex_);
    auto& slot = time_[{n_t, m_t}];
    if (!slot) {
      auto t = std::make_shared<TimeTables>();
      t->synthesis = make_time_synthesis(n_t, m_t);
      t->analysis = t->synthesis.adjoint() / static_cast<double>(m_t);
      slot = std::move(t);
    }
    return slot;
  }

  std::shared_ptr<const Eigen::MatrixXd> space(Basis basis, int n_x, int intervals, int first,
                                               int last) {
    std::lock_guard lock(mutex_);
    auto& slot = space_[{static_cast<int>(basis), n_x, intervals, first, last}];
    if (!slot) {
      slot = std::make_shared<const Eigen::MatrixXd>(
          make_space_synthesis(basis, n_x, intervals, first, last));
    }
    return slot;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::shared_ptr<const TimeTables>> time_;
  std::map<std::tuple<int, int, int, int, int>, std::shared_ptr<const Eigen::MatrixXd>> space_;
};

TableCache& cache() {
  static TableCache instance;
  return instance;
}

// Layout of the space nodes of a grid with m_x stored columns.
struct SpaceLayout {
  int intervals;
  int first;
  int last;
};

SpaceLayout layout_of(Basis basis, int m_x) {
  if (basis == Basis::DirichletSine) return {m_x + 1, 1, m_x};
  return {m_x - 1, 0, m_x - 1};
}

// Trapezoid weights on nodes first..last of [0,1] split into `intervals`.
Eigen::VectorXd trapezoid_weights(const SpaceLayout& l) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(l.last - l.first + 1, 1.0 / l.intervals);
  if (l.first == 0) w(0) *= 0.5;
  if (l.last == l.intervals) w(w.size() - 1) *= 0.5;
  return w;
}

int dealias_time_nodes(int n_t) { return 3 * n_t + 1; }
int dealias_intervals(int n_x) { return (3 * n_x) / 2 + 1; }

std::string shape_string(const SpectralField& u) {
  std::ostringstream os;
  os << "(n_t=" << u.n_t() << ", n_x=" << u.n_x() << ", " << to_string(u.basis()) << ")";
  return os.str();
}

}  // namespace

const char* to_string(Basis basis) noexcept {
  return basis == Basis::DirichletSine ? "dirichlet-sine" : "neumann-cosine";
}

SpectralField::SpectralField(int n_t, int n_x, Basis basis)
    : n_t_(n_t), n_x_(n_x), basis_(basis) {
  if (n_t < 0 || n_x < 0) throw std::invalid_argument("SpectralField: negative truncation");
  coeffs_ = Eigen::MatrixXcd::Zero(time_modes(), space_modes());
}

void SpectralField::set_mode(int n, int m, Complex value) {
  if (std::abs(n) > n_t_ || m < first_mode() || m > n_x_) {
    std::ostringstream os;
    os << "mode (" << n << ", " << m << ") outside truncation " << shape_string(*this);
    throw std::out_of_range(os.str());
  }
  if (n == 0) {
    (*this)(0, m) = Complex(value.real(), 0.0);
    return;
  }
  (*this)(n, m) = value;
  (*this)(-n, m) = std::conj(value);
}

bool SpectralField::same_shape(const SpectralField& other) const noexcept {
  return n_t_ == other.n_t_ && n_x_ == other.n_x_ && basis_ == other.basis_;
}

void SpectralField::require_same_shape(const SpectralField& other) const {
  if (!same_shape(other)) {
    throw BasisMismatchError("field shapes differ: " + shape_string(*this) + " vs " +
                             shape_string(other));
  }
}

double SpectralField::max_abs() const {
  return coeffs_.size() == 0 ? 0.0 : coeffs_.cwiseAbs().maxCoeff();
}

double SpectralField::hermitian_defect() const {
  double defect = 0.0;
  for (int n = 0; n <= n_t_; ++n) {
    for (int m = first_mode(); m <= n_x_; ++m) {
      defect = std::max(defect, std::abs((*this)(-n, m) - std::conj((*this)(n, m))));
    }
  }
  return defect;
}

void SpectralField::enforce_hermitian() {
  for (int m = first_mode(); m <= n_x_; ++m) {
    (*this)(0, m) = Complex((*this)(0, m).real(), 0.0);
    for (int n = 1; n <= n_t_; ++n) (*this)(-n, m) = std::conj((*this)(n, m));
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_shape(other);
  coeffs_ += other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_shape(other);
  coeffs_ -= other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator*=(Complex scale) {
  coeffs_ *= scale;
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  coeffs_ *= scale;
  return *this;
}

double time_node(int j, int m_t) noexcept { return static_cast<double>(j) / m_t; }

double space_node(int i, int m_x, Basis basis) noexcept {
  const SpaceLayout l = layout_of(basis, m_x);
  return static_cast<double>(i + l.first) / l.intervals;
}

double GridField::t(int j) const noexcept { return time_node(j, m_t()); }
double GridField::x(int i) const noexcept { return space_node(i, m_x(), basis); }

GridField to_grid(const SpectralField& u, int m_t, int m_x) {
  const int min_x = u.basis() == Basis::DirichletSine ? u.n_x() : u.n_x() + 2;
  if (m_t < 2 * u.n_t() + 1 || m_x < min_x) {
    std::ostringstream os;
    os << "to_grid: grid " << m_t << "x" << m_x << " too small for " << shape_string(u);
    throw ResolutionError(os.str());
  }
  const SpaceLayout l = layout_of(u.basis(), m_x);
  const auto time = cache().time(u.n_t(), m_t);
  const auto space = cache().space(u.basis(), u.n_x(), l.intervals, l.first, l.last);

  const Eigen::MatrixXcd partial = u.coeffs() * space->transpose();
  GridField g;
  g.basis = u.basis();
  g.values = (time->synthesis * partial).real();
  return g;
}

SpectralField to_spectral(const GridField& g, int n_t, int n_x, Basis basis) {
  if (g.basis == Basis::DirichletSine && basis == Basis::NeumannCosine) {
    throw BasisMismatchError("to_spectral: interior sine grid cannot be projected onto cosines");
  }
  const SpaceLayout l = layout_of(g.basis, g.m_x());
  const int max_mode = basis == Basis::DirichletSine ? l.intervals - 1 : l.intervals - 1;
  if (g.m_t() < 2 * n_t + 1 || n_x > max_mode || l.intervals < 1) {
    std::ostringstream os;
    os << "to_spectral: grid " << g.m_t() << "x" << g.m_x() << " too small for n_t=" << n_t
       << ", n_x=" << n_x;
    throw ResolutionError(os.str());
  }
  const auto time = cache().time(n_t, g.m_t());
  const auto space = cache().space(basis, n_x, l.intervals, l.first, l.last);
  const Eigen::VectorXd w = trapezoid_weights(l);

  const Eigen::MatrixXd weighted = g.values * w.asDiagonal() * (*space);
  SpectralField u(n_t, n_x, basis);
  u.coeffs() = time->analysis * weighted;
  u.enforce_hermitian();
  return u;
}

SpectralField to_spectral(const GridField& g, int n_t, int n_x) {
  return to_spectral(g, n_t, n_x, g.basis);
}

Basis product_basis(Basis a, Basis b) noexcept {
  return a == b ? Basis::NeumannCosine : Basis::DirichletSine;
}

struct MultiplicationOperator::Tables {
  std::shared_ptr<const TimeTables> time;
  std::shared_ptr<const Eigen::MatrixXd> sine;
  std::shared_ptr<const Eigen::MatrixXd> cosine;
  Eigen::VectorXd weights;

  const Eigen::MatrixXd& space(Basis b) const {
    return b == Basis::DirichletSine ? *sine : *cosine;
  }
};

MultiplicationOperator::MultiplicationOperator(const SpectralField& m)
    : n_t_(m.n_t()), n_x_(m.n_x()), basis_(m.basis()) {
  const int m_t = dealias_time_nodes(n_t_);
  const SpaceLayout l{dealias_intervals(n_x_), 0, dealias_intervals(n_x_)};
  auto tables = std::make_shared<Tables>();
  tables->time = cache().time(n_t_, m_t);
  tables->sine = cache().space(Basis::DirichletSine, n_x_, l.intervals, l.first, l.last);
  tables->cosine = cache().space(Basis::NeumannCosine, n_x_, l.intervals, l.first, l.last);
  tables->weights = trapezoid_weights(l);
  grid_ = tables->time->synthesis * (m.coeffs() * tables->space(basis_).transpose());
  tables_ = std::move(tables);
}

SpectralField MultiplicationOperator::apply(const SpectralField& w) const {
  if (w.n_t() != n_t_ || w.n_x() != n_x_) {
    std::ostringstream os;
    os << "dealiased product: truncations differ (" << n_t_ << ", " << n_x_ << ") vs "
       << shape_string(w);
    throw BasisMismatchError(os.str());
  }
  const Tables& t = *tables_;
  const Basis out_basis = product_basis(basis_, w.basis());
  Eigen::MatrixXcd grid =
      t.time->synthesis * (w.coeffs() * t.space(w.basis()).transpose());
  grid = grid.cwiseProduct(grid_) * t.weights.asDiagonal();
  SpectralField out(n_t_, n_x_, out_basis);
  out.coeffs() = t.time->analysis * (grid * t.space(out_basis));
  return out;
}

SpectralField dealiased_product(const SpectralField& u, const SpectralField& v) {
  return MultiplicationOperator(u).apply(v);
}

SpectralField random_field(std::uint64_t seed, int n_t, int n_x, double decay, Basis basis) {
  if (!(decay > 0.0)) throw std::invalid_argument("random_field: decay must be positive");
  SpectralField u(n_t, n_x, basis);
  const auto unit = [](std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  for (int n = 0; n <= n_t; ++n) {
    for (int m = u.first_mode(); m <= n_x; ++m) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                        static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(n),
                        static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(basis)};
      std::mt19937_64 gen(seq);
      const double re = 2.0 * unit(gen) - 1.0;
      const double im = n == 0 ? 0.0 : 2.0 * unit(gen) - 1.0;
      const double envelope = std::pow(1.0 + n, -decay) * std::pow(1.0 + m, -decay);
      u.set_mode(n, m, envelope * Complex(re, im));
    }
  }
  return u;
}

SpectralField resized(const SpectralField& u, int n_t, int n_x) {
  SpectralField out(n_t, n_x, u.basis());
  const int nt = std::min(n_t, u.n_t());
  const int nx = std::min(n_x, u.n_x());
  for (int n = -nt; n <= nt; ++n) {
    for (int m = u.first_mode(); m <= nx; ++m) out(n, m) = u(n, m);
  }
  return out;
}

Complex inner_product(const SpectralField& u, const SpectralField& v) {
  if (!u.same_shape(v)) {
    throw BasisMismatchError("inner_product: shapes differ: " + shape_string(u) + " vs " +
                             shape_string(v));
  }
  return (u.coeffs().array() * v.coeffs().array().conjugate()).sum();
}

double pairing(const SpectralField& f, const SpectralField& u) {
  return inner_product(f, u).real();
}

}  // namespace tpb
