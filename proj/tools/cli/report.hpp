#pragma once

// Report documents: ordered JSON whose only run-dependent field is the
// leading "generated_at" timestamp.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "tpb/norms.hpp"
#include "tpb/solver.hpp"

namespace tpb::cli {

using Report = nlohmann::ordered_json;

/// Header with generated_at, tool, version and command; status "running".
Report make_report(const std::string& command);

/// UTC time in ISO 8601, second resolution.
std::string utc_timestamp();

Report to_json(const NormReport& r);
Report to_json(const SolveReport& r);

/// Writes the report with two-space indentation and a trailing newline.
void write_report(const std::filesystem::path& path, const Report& report);

/// The document without its generated_at field, as written to disk.
std::string canonical_text(const Report& report);

}  // namespace tpb::cli
