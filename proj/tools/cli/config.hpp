#pragma once

// Run configuration: a JSON document validated against a fixed schema.
// Errors name the offending location as a JSON pointer.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpb/solver.hpp"
#include "tpb/spectral_field.hpp"

namespace tpb::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct ModeSpec {
  int n = 0;
  int m = 0;
  double re = 0.0;
  double im = 0.0;
};

struct ForcingSpec {
  enum class Kind { Modes, GridFile, Decomposition, Manufactured };
  Kind kind = Kind::Modes;
  std::vector<ModeSpec> modes;    // Modes
  std::filesystem::path grid_file;  // GridFile
  std::vector<ModeSpec> g_modes;  // Decomposition
  std::vector<ModeSpec> h_modes;  // Decomposition (cosine, m >= 0)
  std::vector<ModeSpec> u_modes;  // Manufactured: f = T(u*)
};

struct OutputSpec {
  std::filesystem::path report_path;
  std::filesystem::path field_csv_path;
  std::filesystem::path table_csv_path;  // sweep
  int precision = 17;
  int grid_m_t = 0;  // 0: 2 (2 n_t + 1)
  int grid_m_x = 0;  // 0: 2 n_x + 1
};

struct VerifySpec {
  int samples = 100;          // random fields per operator identity
  int interpolation_samples = 1000;
  int probe_samples = 200;
  int chain_pairs = 100;
  int advections = 50;
  int n_starts = 3;
  std::map<std::string, double> tolerances;  // overrides by invariant name
};

struct SweepSpec {
  std::string param;  // mu | n_modes | forcing_amplitude
  std::vector<double> values;
  bool monodromy = false;
};

struct ColeHopfSpec {
  std::filesystem::path solution_csv;  // optional prior solution
  std::filesystem::path phi_file;      // optional S3 samples to map back
  int n_starts = 3;
  int steps = 512;
  int power_iters = 2000;
};

struct ScaleSpec {
  double period = 1.0;
  double length = 1.0;
  double viscosity = 1.0;
};

struct RunConfig {
  double mu = 1.0;
  int n_t = 16;
  int n_x = 16;
  std::uint64_t seed = 7;
  std::string method = "homotopy";  // homotopy | newton
  std::optional<double> c_gn;       // absent: probed
  ForcingSpec forcing;
  SolverConfig solver;
  OutputSpec outputs;
  VerifySpec verify;
  SweepSpec sweep;
  ColeHopfSpec colehopf;
  ScaleSpec scale;

  int grid_m_t() const { return outputs.grid_m_t > 0 ? outputs.grid_m_t : 2 * (2 * n_t + 1); }
  int grid_m_x() const { return outputs.grid_m_x > 0 ? outputs.grid_m_x : 2 * n_x + 1; }
};

/// Applies "a.b.0.c=value" to a JSON document. The value is parsed as JSON
/// when possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates a document. Relative input paths resolve against base_dir.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Reads the file, applies overrides in order and validates.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides,
                      nlohmann::json* raw = nullptr);

/// Builds the Dirichlet forcing at truncation (n_t, n_x).
SpectralField build_forcing(const RunConfig& cfg, int n_t, int n_x);
SpectralField build_forcing(const RunConfig& cfg);

/// The manufactured u* at (n_t, n_x); only for the manufactured kind.
SpectralField manufactured_solution(const RunConfig& cfg, int n_t, int n_x);

const char* to_string(ForcingSpec::Kind kind) noexcept;

}  // namespace tpb::cli
