#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "csv_io.hpp"
#include "invariants.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "tpb/colehopf.hpp"
#include "tpb/errors.hpp"
#include "tpb/norms.hpp"
#include "tpb/scaling.hpp"
#include "tpb/solver.hpp"

namespace tpb::cli {
namespace {

const char* status_name(int code) {
  switch (code) {
    case kOk:
      return "ok";
    case kConfigError:
      return "config_error";
    case kSolverFailure:
      return "solver_failure";
    case kVerifyFailure:
      return "verify_failure";
  }
  return "unknown";
}

Report error_entry(const char* type, const std::string& message) {
  Report e;
  e["type"] = type;
  e["message"] = message;
  return e;
}

Report config_echo(const RunConfig& cfg) {
  Report c;
  c["mu"] = cfg.mu;
  c["n_t"] = cfg.n_t;
  c["n_x"] = cfg.n_x;
  c["seed"] = cfg.seed;
  c["forcing_kind"] = to_string(cfg.forcing.kind);
  c["method"] = cfg.method;
  return c;
}

// Runs body with a report that is written however the body exits.
int with_report(const RunConfig& cfg, const std::string& command, std::ostream& log,
                const std::function<int(Report&)>& body) {
  Report report = make_report(command);
  report["config"] = config_echo(cfg);
  report["errors"] = Report::array();
  int code = kOk;
  try {
    code = body(report);
  } catch (const ConfigError& e) {
    code = kConfigError;
    report["errors"].push_back(error_entry("config", e.what()));
  } catch (const CsvError& e) {
    code = kConfigError;
    report["errors"].push_back(error_entry("input", e.what()));
  } catch (const NonPositiveError& e) {
    code = kConfigError;
    report["errors"].push_back(error_entry("nonpositive_phi", e.what()));
  } catch (const ContinuationError& e) {
    code = kSolverFailure;
    report["errors"].push_back(error_entry("continuation", e.what()));
  } catch (const NoConvergenceError& e) {
    code = kSolverFailure;
    report["errors"].push_back(error_entry("no_convergence", e.what()));
  } catch (const std::exception& e) {
    code = kSolverFailure;
    report["errors"].push_back(error_entry("failure", e.what()));
  }
  report["status"] = status_name(code);
  for (const auto& e : report["errors"]) log << "error: " << e["message"].get<std::string>() << '\n';
  write_report(cfg.outputs.report_path, report);
  return code;
}

double probe_c_gn(const RunConfig& cfg, int n_t, int n_x) {
  if (cfg.c_gn) return *cfg.c_gn;
  const std::uint64_t seeds[] = {cfg.seed};
  ProbeOptions options;
  options.n_t = n_t;
  options.n_x = n_x;
  return gn_probe(seeds, cfg.verify.probe_samples, options);
}

SolveReport run_solver(const RunConfig& cfg, const SpectralField& f, double c_gn) {
  SolverConfig s = cfg.solver;
  s.mu = cfg.mu;
  s.c_gn = c_gn;
  if (cfg.method == "newton") return newton_solve(f, SpectralField(f.n_t(), f.n_x()), s);
  return homotopy_solve(f, s);
}

void dump_field(const RunConfig& cfg, const SpectralField& u, std::ostream& log) {
  if (cfg.outputs.field_csv_path.empty()) return;
  write_grid_csv(cfg.outputs.field_csv_path, to_grid(u, cfg.grid_m_t(), cfg.grid_m_x()), cfg.outputs.precision);
  log << "wrote " << cfg.outputs.field_csv_path.string() << '\n';
}

std::string format(double v, int precision) {
  std::string s;
  append_number(s, v, precision);
  return s;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  return with_report(cfg, "solve", log, [&](Report& report) {
    const SpectralField f = build_forcing(cfg);
    const double c_gn = probe_c_gn(cfg, cfg.n_t, cfg.n_x);
    report["forcing"] = {{"dual_norm", dual_norm(f)}};
    report["apriori"] = {{"c_gn", c_gn}, {"c_gn_source", cfg.c_gn ? "config" : "probe"}};
    const SolveReport r = run_solver(cfg, f, c_gn);
    report["solution"] = to_json(norm_report(r.u));
    report["solver"] = to_json(r);
    if (cfg.forcing.kind == ForcingSpec::Kind::Manufactured) {
      const double err = l2_norm(r.u - manufactured_solution(cfg, cfg.n_t, cfg.n_x));
      report["manufactured_error_l2"] = err;
      log << "manufactured L2 error " << format(err, 6) << '\n';
    }
    dump_field(cfg, r.u, log);
    log << "solve: " << (r.converged ? "converged" : "did not converge") << ", residual "
        << format(r.residual_dual, 6) << ", " << r.newton_iters << " Newton iterations\n";
    return r.converged ? kOk : kSolverFailure;
  });
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  return with_report(cfg, "verify", log, [&](Report& report) {
    const std::vector<InvariantResult> results = run_invariant_suite(cfg, worker_count());
    Report list = Report::array();
    int failed = 0;
    for (const InvariantResult& r : results) {
      Report e;
      e["name"] = r.name;
      e["passed"] = r.passed;
      e["measured"] = r.measured;
      e["tolerance"] = r.tolerance;
      e["detail"] = r.detail;
      list.push_back(std::move(e));
      if (!r.passed) ++failed;
      log << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << format(r.measured, 6)
          << " <= " << format(r.tolerance, 6) << '\n';
    }
    report["invariants"] = std::move(list);
    report["summary"] = {{"total", results.size()}, {"passed", results.size() - failed}, {"failed", failed}};
    return failed == 0 ? kOk : kVerifyFailure;
  });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  return with_report(cfg, "sweep", log, [&](Report& report) {
    if (cfg.sweep.param.empty()) throw ConfigError("/sweep", "missing sweep section");
    const SweepSpec& sweep = cfg.sweep;

    std::map<int, double> probes;
    for (double v : sweep.values) {
      const int n = sweep.param == "n_modes" ? static_cast<int>(v) : cfg.n_t;
      if (!probes.count(n)) probes[n] = 0.0;
    }
    const int workers = worker_count();
    std::vector<int> sizes;
    for (const auto& [n, c] : probes) sizes.push_back(n);
    const std::vector<double> constants = parallel_map(sizes.size(), workers, [&](std::size_t i) {
      return sweep.param == "n_modes" ? probe_c_gn(cfg, sizes[i], sizes[i]) : probe_c_gn(cfg, cfg.n_t, cfg.n_x);
    });
    for (std::size_t i = 0; i < sizes.size(); ++i) probes[sizes[i]] = constants[i];

    const std::vector<Report> rows = parallel_map(sweep.values.size(), workers, [&](std::size_t i) {
      const double value = sweep.values[i];
      RunConfig row = cfg;
      double amplitude = 1.0;
      if (sweep.param == "mu") {
        row.mu = value;
        row.solver.mu = value;
      } else if (sweep.param == "n_modes") {
        row.n_t = row.n_x = static_cast<int>(value);
      } else {
        amplitude = value;
      }
      Report out;
      out["value"] = value;
      try {
        const SpectralField f = amplitude * build_forcing(row, row.n_t, row.n_x);
        const SolveReport r = run_solver(row, f, probes.at(sweep.param == "n_modes" ? row.n_t : cfg.n_t));
        out["status"] = r.converged ? "ok" : "failed";
        out["newton_iters"] = r.newton_iters;
        out["residual_dual"] = r.residual_dual;
        out["l2_norm"] = l2_norm(r.u);
        out["aniso_norm"] = aniso_norm(r.u);
        out["energy_gap"] = r.energy_gap;
        out["apriori_margin"] = r.apriori_margin ? Report(*r.apriori_margin) : Report(nullptr);
        if (row.forcing.kind == ForcingSpec::Kind::Manufactured) {
          out["error"] = l2_norm(r.u - manufactured_solution(row, row.n_t, row.n_x));
        }
        if (sweep.monodromy) out["rho"] = monodromy_leading_pair(r.u, row.mu).rho;
      } catch (const std::exception& e) {
        out["status"] = "failed";
        out["message"] = e.what();
      }
      return out;
    });

    bool any_failed = false;
    const char* columns[] = {"newton_iters", "residual_dual", "l2_norm", "aniso_norm", "energy_gap",
                             "apriori_margin", "error", "rho"};
    std::string table = "param,value,status";
    for (const char* c : columns) table += std::string(",") + c;
    table += '\n';
    for (const Report& row : rows) {
      any_failed = any_failed || row["status"] != "ok";
      table += sweep.param + ",";
      append_number(table, row["value"].get<double>(), cfg.outputs.precision);
      table += "," + row["status"].get<std::string>();
      for (const char* c : columns) {
        table += ',';
        if (row.contains(c) && row[c].is_number()) append_number(table, row[c].get<double>(), cfg.outputs.precision);
      }
      table += '\n';
      log << sweep.param << '=' << format(row["value"].get<double>(), 6) << ": "
          << row["status"].get<std::string>() << '\n';
    }
    report["sweep"] = {{"param", sweep.param}, {"rows", rows}};
    if (!cfg.outputs.table_csv_path.empty()) {
      const auto& path = cfg.outputs.table_csv_path;
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      std::ofstream(path, std::ios::binary) << table;
    }
    return any_failed ? kSolverFailure : kOk;
  });
}

int cmd_colehopf(const RunConfig& cfg, std::ostream& log) {
  return with_report(cfg, "colehopf", log, [&](Report& report) {
    const ColeHopfSpec& spec = cfg.colehopf;
    const SpectralField f = build_forcing(cfg);
    const BurgersOperator op(cfg.mu);

    SpectralField v;
    if (!spec.solution_csv.empty()) {
      const GridField g = read_grid_csv(spec.solution_csv, Basis::DirichletSine);
      if (g.m_t() < 2 * cfg.n_t + 1 || g.m_x() < cfg.n_x) {
        throw ConfigError("/colehopf/solution_csv", "solution grid is too coarse for the truncation");
      }
      v = to_spectral(g, cfg.n_t, cfg.n_x, Basis::DirichletSine);
      report["background"] = {{"source", "csv"}};
    } else {
      v = run_solver(cfg, f, probe_c_gn(cfg, cfg.n_t, cfg.n_x)).u;
      report["background"] = {{"source", "solve"}};
    }
    report["background"]["residual_dual"] = dual_norm(op.apply_T(v) - f);
    report["background"]["aniso_norm"] = aniso_norm(v);

    // Phi supplied from a file is mapped back to S2 and S1 first, so a
    // nonpositive sample fails before the expensive stages.
    if (!spec.phi_file.empty()) {
      const GridField g = read_grid_csv(spec.phi_file, Basis::NeumannCosine);
      const double minimum = g.values.minCoeff();
      if (!(minimum > 0.0)) {
        throw NonPositiveError("phi file '" + spec.phi_file.string() + "' has a nonpositive sample (" +
                                   format(minimum, 6) + ")",
                               minimum);
      }
      ColeHopfElement s3;
      s3.kind = SetKind::S3;
      s3.phi = to_spectral(g, cfg.n_t, cfg.n_x, Basis::NeumannCosine);
      s3.v = v;
      const ColeHopfElement s1 = project_s2_to_s1(s3_to_s2(s3, cfg.mu));
      report["phi_file"] = {{"s1_residual", dual_norm(s1_residual(s1.w, v, cfg.mu))},
                            {"w_l2", l2_norm(s1.w)}};
    }

    const UniquenessReport u = verify_uniqueness(f, cfg.solver, spec.n_starts);
    report["uniqueness"] = {{"starts", spec.n_starts},
                            {"max_distance", u.max_distance},
                            {"max_s1_residual", u.max_s1_residual},
                            {"unique", u.unique}};

    double max_k = 0.0;
    double max_roundtrip = 0.0;
    Report chain = Report::array();
    for (std::size_t i = 0; i < u.solutions.size(); ++i) {
      for (std::size_t j = i + 1; j < u.solutions.size(); ++j) {
        const SpectralField w = u.solutions[i] - u.solutions[j];
        const ColeHopfElement s2 = lift_s1_to_s2(w, u.solutions[j], cfg.mu);
        const ColeHopfElement s3 = s2_to_s3(s2, cfg.mu);
        const ColeHopfElement s2b = s3_to_s2(s3, cfg.mu);
        const ColeHopfElement s1 = project_s2_to_s1(s2b);
        const double rt = l2_norm(s1.w - w);
        max_k = std::max({max_k, std::abs(s2.K), std::abs(s3.K), std::abs(s2b.K)});
        max_roundtrip = std::max(max_roundtrip, rt);
        chain.push_back({{"pair", {i, j}}, {"w_l2", l2_norm(w)}, {"K_s2", s2.K}, {"K_s3", s3.K},
                         {"roundtrip_l2", rt}});
      }
    }
    report["chain"] = std::move(chain);

    const MonodromyResult m = monodromy_leading_pair(v, cfg.mu, spec.steps, spec.power_iters);
    report["monodromy"] = {{"rho", m.rho}, {"flatness", m.flatness}, {"iterations", m.iterations}};

    const bool ok = u.unique && std::abs(m.rho - 1.0) <= 1e-6 && m.flatness <= 1e-5 && max_k <= 1e-6 &&
                    max_roundtrip <= 1e-9;
    report["checks"] = {{"rho_within_1e-6", std::abs(m.rho - 1.0) <= 1e-6},
                        {"flatness_within_1e-5", m.flatness <= 1e-5},
                        {"K_within_1e-6", max_k <= 1e-6},
                        {"roundtrip_within_1e-9", max_roundtrip <= 1e-9},
                        {"unique", u.unique}};
    log << "colehopf: rho - 1 = " << format(m.rho - 1.0, 6) << ", flatness " << format(m.flatness, 6)
        << ", max |K| " << format(max_k, 6) << '\n';
    return ok ? kOk : kVerifyFailure;
  });
}

int cmd_scale(const RunConfig& cfg, std::ostream& log) {
  return with_report(cfg, "scale", log, [&](Report& report) {
    PhysicalProblem p;
    p.period = cfg.scale.period;
    p.length = cfg.scale.length;
    p.viscosity = cfg.scale.viscosity;
    p.forcing = build_forcing(cfg);
    const NormalizedProblem np = normalize(p);
    report["normalized"] = {{"mu", np.mu}, {"flip", np.flip}, {"f_dual_norm", dual_norm(np.f)}};

    RunConfig normalized = cfg;
    normalized.mu = np.mu;
    normalized.solver.mu = np.mu;
    const SolveReport r = run_solver(normalized, np.f, probe_c_gn(cfg, cfg.n_t, cfg.n_x));
    report["solver"] = to_json(r);
    const PhysicalSolution sol = denormalize(r.u, p);
    const GridField samples = sol.samples(cfg.grid_m_t(), cfg.grid_m_x());
    report["physical"] = {{"period", sol.period()},
                          {"length", sol.length()},
                          {"velocity_scale", sol.velocity_scale()},
                          {"max_abs_u", samples.values.cwiseAbs().maxCoeff()}};
    if (!cfg.outputs.field_csv_path.empty()) {
      write_grid_csv(cfg.outputs.field_csv_path, samples, cfg.outputs.precision, "u", sol.period(), sol.length());
    }
    log << "scale: mu = " << format(np.mu, 10) << (np.flip ? " (time reversed)" : "") << '\n';
    return r.converged ? kOk : kSolverFailure;
  });
}

int run(const std::string& command, const std::filesystem::path& config_path,
        const std::vector<std::string>& overrides, std::ostream& log) {
  nlohmann::json raw;
  RunConfig cfg;
  try {
    cfg = load_config(config_path, overrides, &raw);
    worker_count();
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    // Record the failure where the report would have gone, if that is known.
    const auto* outputs = raw.is_object() && raw.contains("outputs") ? &raw["outputs"] : nullptr;
    if (outputs && outputs->is_object() && outputs->contains("report_path") && (*outputs)["report_path"].is_string()) {
      Report report = make_report(command);
      report["status"] = status_name(kConfigError);
      report["errors"] = Report::array({error_entry("config", e.what())});
      try {
        write_report((*outputs)["report_path"].get<std::string>(), report);
      } catch (const std::exception&) {
      }
    }
    return kConfigError;
  }
  if (command == "solve") return cmd_solve(cfg, log);
  if (command == "verify") return cmd_verify(cfg, log);
  if (command == "sweep") return cmd_sweep(cfg, log);
  if (command == "colehopf") return cmd_colehopf(cfg, log);
  if (command == "scale") return cmd_scale(cfg, log);
  log << "error: unknown command '" << command << "'\n";
  return kConfigError;
}

}  // namespace tpb::cli
