#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace tpb::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kSolverFailure = 2, kVerifyFailure = 3 };

int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_colehopf(const RunConfig& cfg, std::ostream& log);
int cmd_scale(const RunConfig& cfg, std::ostream& log);

/// Loads the config and dispatches; maps every failure to its exit code and
/// records it in the report when a report path is known.
int run(const std::string& command, const std::filesystem::path& config_path,
        const std::vector<std::string>& overrides, std::ostream& log);

}  // namespace tpb::cli
