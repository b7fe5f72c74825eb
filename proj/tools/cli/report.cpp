#include "report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace tpb::cli {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Report make_report(const std::string& command) {
  Report r;
  r["generated_at"] = utc_timestamp();
  r["tool"] = "tpb";
  r["version"] = TPB_VERSION;
  r["command"] = command;
  r["status"] = "running";
  return r;
}

Report to_json(const NormReport& n) {
  Report r;
  r["l2"] = n.l2;
  r["l4"] = n.l4;
  r["half_dt"] = n.half_dt;
  r["dx"] = n.dx;
  r["aniso"] = n.aniso;
  return r;
}

Report to_json(const SolveReport& s) {
  Report r;
  r["converged"] = s.converged;
  r["residual_dual"] = s.residual_dual;
  r["newton_iters"] = s.newton_iters;
  r["energy_gap"] = s.energy_gap;
  r["apriori_bound"] = s.apriori_bound ? Report(*s.apriori_bound) : Report(nullptr);
  r["apriori_margin"] = s.apriori_margin ? Report(*s.apriori_margin) : Report(nullptr);
  r["residual_history"] = s.residual_history;
  Report path = Report::array();
  for (const LambdaStep& step : s.lambda_path) {
    Report e;
    e["lambda"] = step.lambda;
    e["residual"] = step.residual;
    e["norm"] = step.norm;
    e["newton_iters"] = step.newton_iters;
    e["bound"] = step.bound ? Report(*step.bound) : Report(nullptr);
    path.push_back(std::move(e));
  }
  r["lambda_path"] = std::move(path);
  return r;
}

void write_report(const std::filesystem::path& path, const Report& report) {
  if (path.empty()) return;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report '" + path.string() + "'");
  out << report.dump(2) << '\n';
}

std::string canonical_text(const Report& report) {
  Report copy = report;
  copy.erase("generated_at");
  return copy.dump(2) + "\n";
}

}  // namespace tpb::cli
