#pragma once

// Field dumps: header "t,x,<name>", one row per node, t outer and x inner,
// LF line endings, shortest-form numbers at a fixed significant precision.

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>

#include "tpb/spectral_field.hpp"

namespace tpb::cli {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes v with `precision` significant digits using std::to_chars.
void append_number(std::string& out, double v, int precision);

/// Node coordinates are multiplied by t_scale and x_scale.
void write_grid_csv(std::ostream& out, const GridField& g, int precision, const std::string& name = "u",
                    double t_scale = 1.0, double x_scale = 1.0);
void write_grid_csv(const std::filesystem::path& path, const GridField& g, int precision,
                    const std::string& name = "u", double t_scale = 1.0, double x_scale = 1.0);

/// Reads a dump written on the grid of the given basis (unit coordinates).
/// Throws CsvError on malformed files or nodes that do not match the grid.
GridField read_grid_csv(const std::filesystem::path& path, Basis basis);

}  // namespace tpb::cli
