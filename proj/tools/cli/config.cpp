#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "csv_io.hpp"
#include "tpb/operators.hpp"

namespace tpb::cli {
namespace {

using nlohmann::json;

// RFC 6901 escaping of a key inside a pointer.
std::string child(const std::string& pointer, const std::string& key) {
  std::string out = pointer + "/";
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& pointer, std::size_t index) {
  return pointer + "/" + std::to_string(index);
}

const char* type_name(const json& j) { return j.type_name(); }

void require_object(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer.empty() ? "/" : pointer, std::string("expected an object, got ") + type_name(j));
}

void check_keys(const json& j, const std::string& pointer,
                std::initializer_list<const char*> allowed) {
  require_object(j, pointer);
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(child(pointer, item.key()), "unknown key");
  }
}

double number(const json& j, const std::string& pointer) {
  if (!j.is_number()) throw ConfigError(pointer, std::string("expected a number, got ") + type_name(j));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(pointer, "expected a finite number");
  return v;
}

long long integer(const json& j, const std::string& pointer) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<long long>(v);
  }
  throw ConfigError(pointer, std::string("expected an integer, got ") + type_name(j));
}

template <class T>
void read_number(const json& obj, const std::string& pointer, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const std::string p = child(pointer, key);
  if constexpr (std::is_integral_v<T>) {
    const long long v = integer(obj.at(key), p);
    if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) {
      throw ConfigError(p, "integer out of range");
    }
    out = static_cast<T>(v);
  } else {
    out = number(obj.at(key), p);
  }
}

void read_string(const json& obj, const std::string& pointer, const char* key, std::string& out) {
  if (!obj.contains(key)) return;
  const json& j = obj.at(key);
  if (!j.is_string()) throw ConfigError(child(pointer, key), std::string("expected a string, got ") + type_name(j));
  out = j.get<std::string>();
}

void read_path(const json& obj, const std::string& pointer, const char* key,
               std::filesystem::path& out, const std::filesystem::path& base) {
  std::string s;
  read_string(obj, pointer, key, s);
  if (s.empty()) return;
  std::filesystem::path p(s);
  out = (p.is_relative() && !base.empty()) ? base / p : p;
}

void read_bool(const json& obj, const std::string& pointer, const char* key, bool& out) {
  if (!obj.contains(key)) return;
  const json& j = obj.at(key);
  if (!j.is_boolean()) throw ConfigError(child(pointer, key), std::string("expected a boolean, got ") + type_name(j));
  out = j.get<bool>();
}

void positive(double v, const std::string& pointer) {
  if (!(v > 0.0)) throw ConfigError(pointer, "must be positive");
}

void at_least(long long v, long long lo, const std::string& pointer) {
  if (v < lo) throw ConfigError(pointer, "must be >= " + std::to_string(lo));
}

std::vector<ModeSpec> read_modes(const json& obj, const std::string& pointer, const char* key,
                                 int min_m, int n_t, int n_x) {
  std::vector<ModeSpec> out;
  if (!obj.contains(key)) return out;
  const std::string p = child(pointer, key);
  const json& arr = obj.at(key);
  if (!arr.is_array()) throw ConfigError(p, std::string("expected an array, got ") + type_name(arr));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ep = child(p, i);
    check_keys(arr[i], ep, {"n", "m", "re", "im"});
    if (!arr[i].contains("n") || !arr[i].contains("m")) throw ConfigError(ep, "mode needs both n and m");
    ModeSpec mode;
    read_number(arr[i], ep, "n", mode.n);
    read_number(arr[i], ep, "m", mode.m);
    read_number(arr[i], ep, "re", mode.re);
    read_number(arr[i], ep, "im", mode.im);
    std::ostringstream name;
    name << "mode (n=" << mode.n << ", m=" << mode.m << ")";
    if (mode.n < 0) {
      throw ConfigError(child(ep, "n"), name.str() + " is invalid: n < 0 is implied by its Hermitian partner");
    }
    if (mode.m < min_m) {
      throw ConfigError(child(ep, "m"), name.str() + " is invalid: m must be >= " + std::to_string(min_m));
    }
    if (mode.n > n_t || mode.m > n_x) {
      throw ConfigError(ep, name.str() + " lies outside the truncation (n_t=" + std::to_string(n_t) +
                                ", n_x=" + std::to_string(n_x) + ")");
    }
    if (mode.n == 0 && mode.im != 0.0) {
      throw ConfigError(child(ep, "im"), name.str() + " is invalid: n = 0 modes of a real field are real");
    }
    out.push_back(mode);
  }
  return out;
}

ForcingSpec read_forcing(const json& obj, const std::string& pointer, int n_t, int n_x,
                         const std::filesystem::path& base) {
  ForcingSpec spec;
  if (!obj.contains("forcing")) throw ConfigError(child(pointer, "forcing"), "missing required key");
  const std::string p = child(pointer, "forcing");
  const json& j = obj.at("forcing");
  require_object(j, p);
  std::string kind = "modes";
  read_string(j, p, "kind", kind);
  if (kind == "modes") {
    check_keys(j, p, {"kind", "modes"});
    spec.kind = ForcingSpec::Kind::Modes;
    spec.modes = read_modes(j, p, "modes", 1, n_t, n_x);
  } else if (kind == "grid_file") {
    check_keys(j, p, {"kind", "path"});
    spec.kind = ForcingSpec::Kind::GridFile;
    read_path(j, p, "path", spec.grid_file, base);
    if (spec.grid_file.empty()) throw ConfigError(child(p, "path"), "missing required key");
  } else if (kind == "decomposition") {
    check_keys(j, p, {"kind", "g_modes", "h_modes"});
    spec.kind = ForcingSpec::Kind::Decomposition;
    spec.g_modes = read_modes(j, p, "g_modes", 1, n_t, n_x);
    spec.h_modes = read_modes(j, p, "h_modes", 0, n_t, n_x);
  } else if (kind == "manufactured") {
    check_keys(j, p, {"kind", "u_modes"});
    spec.kind = ForcingSpec::Kind::Manufactured;
    spec.u_modes = read_modes(j, p, "u_modes", 1, n_t, n_x);
  } else {
    throw ConfigError(child(p, "kind"),
                      "unknown forcing kind '" + kind + "' (modes, grid_file, decomposition, manufactured)");
  }
  return spec;
}

void read_solver(const json& obj, const std::string& pointer, RunConfig& cfg) {
  if (!obj.contains("solver")) return;
  const std::string p = child(pointer, "solver");
  const json& j = obj.at("solver");
  check_keys(j, p,
             {"method", "newton_tol", "max_newton", "max_halvings", "homotopy_steps", "krylov_tol",
              "max_krylov", "krylov_restart", "dense_threshold", "c_gn"});
  SolverConfig& s = cfg.solver;
  read_string(j, p, "method", cfg.method);
  if (cfg.method != "homotopy" && cfg.method != "newton") {
    throw ConfigError(child(p, "method"), "expected 'homotopy' or 'newton'");
  }
  read_number(j, p, "newton_tol", s.newton_tol);
  positive(s.newton_tol, child(p, "newton_tol"));
  read_number(j, p, "max_newton", s.max_newton);
  at_least(s.max_newton, 0, child(p, "max_newton"));
  read_number(j, p, "max_halvings", s.max_halvings);
  at_least(s.max_halvings, 0, child(p, "max_halvings"));
  read_number(j, p, "krylov_tol", s.krylov_tol);
  positive(s.krylov_tol, child(p, "krylov_tol"));
  read_number(j, p, "max_krylov", s.max_krylov);
  at_least(s.max_krylov, 1, child(p, "max_krylov"));
  read_number(j, p, "krylov_restart", s.krylov_restart);
  at_least(s.krylov_restart, 1, child(p, "krylov_restart"));
  read_number(j, p, "dense_threshold", s.dense_threshold);
  at_least(s.dense_threshold, 0, child(p, "dense_threshold"));
  if (j.contains("c_gn")) {
    double c = 0.0;
    read_number(j, p, "c_gn", c);
    positive(c, child(p, "c_gn"));
    cfg.c_gn = c;
  }
  if (j.contains("homotopy_steps")) {
    const std::string hp = child(p, "homotopy_steps");
    const json& arr = j.at("homotopy_steps");
    if (!arr.is_array()) throw ConfigError(hp, "expected an array");
    s.homotopy_steps.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) s.homotopy_steps.push_back(number(arr[i], child(hp, i)));
    if (s.homotopy_steps.size() < 2 || s.homotopy_steps.front() != 0.0 || s.homotopy_steps.back() != 1.0) {
      throw ConfigError(hp, "must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < s.homotopy_steps.size(); ++i) {
      if (!(s.homotopy_steps[i] > s.homotopy_steps[i - 1])) {
        throw ConfigError(child(hp, i), "homotopy steps must be strictly increasing");
      }
    }
  }
}

void read_outputs(const json& obj, const std::string& pointer, OutputSpec& out) {
  if (!obj.contains("outputs")) return;
  const std::string p = child(pointer, "outputs");
  const json& j = obj.at("outputs");
  check_keys(j, p, {"report_path", "field_csv_path", "table_csv_path", "precision", "grid_m_t", "grid_m_x"});
  read_path(j, p, "report_path", out.report_path, {});
  read_path(j, p, "field_csv_path", out.field_csv_path, {});
  read_path(j, p, "table_csv_path", out.table_csv_path, {});
  read_number(j, p, "precision", out.precision);
  if (out.precision < 1 || out.precision > 17) throw ConfigError(child(p, "precision"), "must lie in 1..17");
  read_number(j, p, "grid_m_t", out.grid_m_t);
  at_least(out.grid_m_t, 0, child(p, "grid_m_t"));
  read_number(j, p, "grid_m_x", out.grid_m_x);
  at_least(out.grid_m_x, 0, child(p, "grid_m_x"));
}

void read_verify(const json& obj, const std::string& pointer, VerifySpec& v) {
  if (!obj.contains("verify")) return;
  const std::string p = child(pointer, "verify");
  const json& j = obj.at("verify");
  check_keys(j, p, {"samples", "interpolation_samples", "probe_samples", "chain_pairs", "advections",
                    "n_starts", "tolerances"});
  read_number(j, p, "samples", v.samples);
  at_least(v.samples, 1, child(p, "samples"));
  read_number(j, p, "interpolation_samples", v.interpolation_samples);
  at_least(v.interpolation_samples, 1, child(p, "interpolation_samples"));
  read_number(j, p, "probe_samples", v.probe_samples);
  at_least(v.probe_samples, 1, child(p, "probe_samples"));
  read_number(j, p, "chain_pairs", v.chain_pairs);
  at_least(v.chain_pairs, 1, child(p, "chain_pairs"));
  read_number(j, p, "advections", v.advections);
  at_least(v.advections, 1, child(p, "advections"));
  read_number(j, p, "n_starts", v.n_starts);
  at_least(v.n_starts, 2, child(p, "n_starts"));
  if (j.contains("tolerances")) {
    const std::string tp = child(p, "tolerances");
    const json& t = j.at("tolerances");
    require_object(t, tp);
    for (const auto& item : t.items()) v.tolerances[item.key()] = number(item.value(), child(tp, item.key()));
  }
}

void read_sweep(const json& obj, const std::string& pointer, SweepSpec& s) {
  if (!obj.contains("sweep")) return;
  const std::string p = child(pointer, "sweep");
  const json& j = obj.at("sweep");
  check_keys(j, p, {"param", "values", "monodromy"});
  read_string(j, p, "param", s.param);
  if (s.param != "mu" && s.param != "n_modes" && s.param != "forcing_amplitude") {
    throw ConfigError(child(p, "param"), "expected one of mu, n_modes, forcing_amplitude");
  }
  read_bool(j, p, "monodromy", s.monodromy);
  if (!j.contains("values")) throw ConfigError(child(p, "values"), "missing required key");
  const std::string vp = child(p, "values");
  const json& arr = j.at("values");
  if (!arr.is_array()) throw ConfigError(vp, "expected an array");
  if (arr.empty()) throw ConfigError(vp, "sweep needs at least one value");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const double v = number(arr[i], child(vp, i));
    if (s.param == "mu") positive(v, child(vp, i));
    if (s.param == "n_modes" && (v != std::floor(v) || v < 1)) {
      throw ConfigError(child(vp, i), "n_modes values must be positive integers");
    }
    s.values.push_back(v);
  }
}

void read_colehopf(const json& obj, const std::string& pointer, ColeHopfSpec& c,
                   const std::filesystem::path& base) {
  if (!obj.contains("colehopf")) return;
  const std::string p = child(pointer, "colehopf");
  const json& j = obj.at("colehopf");
  check_keys(j, p, {"solution_csv", "phi_file", "n_starts", "steps", "power_iters"});
  read_path(j, p, "solution_csv", c.solution_csv, base);
  read_path(j, p, "phi_file", c.phi_file, base);
  read_number(j, p, "n_starts", c.n_starts);
  at_least(c.n_starts, 2, child(p, "n_starts"));
  read_number(j, p, "steps", c.steps);
  at_least(c.steps, 2, child(p, "steps"));
  read_number(j, p, "power_iters", c.power_iters);
  at_least(c.power_iters, 1, child(p, "power_iters"));
}

void read_scale(const json& obj, const std::string& pointer, ScaleSpec& s) {
  if (!obj.contains("scale")) return;
  const std::string p = child(pointer, "scale");
  const json& j = obj.at("scale");
  check_keys(j, p, {"period", "length", "viscosity"});
  read_number(j, p, "period", s.period);
  positive(s.period, child(p, "period"));
  read_number(j, p, "length", s.length);
  positive(s.length, child(p, "length"));
  read_number(j, p, "viscosity", s.viscosity);
  if (s.viscosity == 0.0) throw ConfigError(child(p, "viscosity"), "must be nonzero");
}

void add_modes(SpectralField& u, const std::vector<ModeSpec>& modes) {
  for (const ModeSpec& mode : modes) {
    if (mode.n > u.n_t() || mode.m > u.n_x()) continue;
    u.set_mode(mode.n, mode.m, u(mode.n, mode.m) + Complex(mode.re, mode.im));
  }
}

}  // namespace

const char* to_string(ForcingSpec::Kind kind) noexcept {
  switch (kind) {
    case ForcingSpec::Kind::Modes:
      return "modes";
    case ForcingSpec::Kind::GridFile:
      return "grid_file";
    case ForcingSpec::Kind::Decomposition:
      return "decomposition";
    case ForcingSpec::Kind::Manufactured:
      return "manufactured";
  }
  return "?";
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("/", "override '" + assignment + "' is not of the form key.path=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::string pointer;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> segments;
  while (std::getline(parts, part, '.')) segments.push_back(part);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string& s = segments[i];
    if (s.empty()) throw ConfigError(pointer.empty() ? "/" : pointer, "empty segment in override '" + key + "'");
    const bool last = i + 1 == segments.size();
    if (node->is_array()) {
      const bool digits = std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
      if (!digits) throw ConfigError(pointer, "override segment '" + s + "' must index an array");
      const std::size_t index = std::stoul(s);
      if (index >= node->size()) throw ConfigError(child(pointer, index), "override index out of range");
      pointer = child(pointer, index);
      node = &(*node)[index];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError(pointer, "override descends into a scalar");
      pointer = child(pointer, s);
      node = &(*node)[s];
    }
    if (last) *node = value;
  }
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  const std::string root;
  check_keys(doc, root,
             {"mu", "n_t", "n_x", "seed", "forcing", "solver", "outputs", "verify", "sweep",
              "colehopf", "scale"});
  RunConfig cfg;
  read_number(doc, root, "mu", cfg.mu);
  positive(cfg.mu, "/mu");
  read_number(doc, root, "n_t", cfg.n_t);
  at_least(cfg.n_t, 0, "/n_t");
  read_number(doc, root, "n_x", cfg.n_x);
  at_least(cfg.n_x, 1, "/n_x");
  if (doc.contains("seed")) {
    const long long s = integer(doc.at("seed"), "/seed");
    at_least(s, 0, "/seed");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  cfg.forcing = read_forcing(doc, root, cfg.n_t, cfg.n_x, base_dir);
  read_solver(doc, root, cfg);
  cfg.solver.mu = cfg.mu;
  if (cfg.c_gn) cfg.solver.c_gn = *cfg.c_gn;
  read_outputs(doc, root, cfg.outputs);
  read_verify(doc, root, cfg.verify);
  read_sweep(doc, root, cfg.sweep);
  read_colehopf(doc, root, cfg.colehopf, base_dir);
  read_scale(doc, root, cfg.scale);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides,
                      json* raw) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open config file '" + path.string() + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("/", "config file '" + path.string() + "' is not valid JSON");
  for (const std::string& o : overrides) apply_override(doc, o);
  if (raw) *raw = doc;
  return parse_config(doc, path.parent_path());
}

SpectralField manufactured_solution(const RunConfig& cfg, int n_t, int n_x) {
  SpectralField u(n_t, n_x);
  add_modes(u, cfg.forcing.u_modes);
  return u;
}

SpectralField build_forcing(const RunConfig& cfg, int n_t, int n_x) {
  switch (cfg.forcing.kind) {
    case ForcingSpec::Kind::Modes: {
      SpectralField f(n_t, n_x);
      add_modes(f, cfg.forcing.modes);
      return f;
    }
    case ForcingSpec::Kind::GridFile: {
      const GridField g = read_grid_csv(cfg.forcing.grid_file, Basis::DirichletSine);
      const int need_t = 2 * n_t + 1;
      if (g.m_t() < need_t || g.m_x() < n_x) {
        throw ConfigError("/forcing/path", "grid file '" + cfg.forcing.grid_file.string() +
                                               "' is too coarse for the truncation");
      }
      return to_spectral(g, n_t, n_x, Basis::DirichletSine);
    }
    case ForcingSpec::Kind::Decomposition: {
      SpectralField g(n_t, n_x);
      add_modes(g, cfg.forcing.g_modes);
      SpectralField h(n_t, n_x, Basis::NeumannCosine);
      for (const ModeSpec& mode : cfg.forcing.h_modes) {
        if (mode.n > n_t || mode.m > n_x) continue;
        h.set_mode(mode.n, mode.m, h(mode.n, mode.m) + Complex(mode.re, mode.im));
      }
      return half_derivative(g) + d_x(h);
    }
    case ForcingSpec::Kind::Manufactured:
      return BurgersOperator(cfg.mu).apply_T(manufactured_solution(cfg, n_t, n_x));
  }
  return SpectralField(n_t, n_x);
}

SpectralField build_forcing(const RunConfig& cfg) { return build_forcing(cfg, cfg.n_t, cfg.n_x); }

}  // namespace tpb::cli
