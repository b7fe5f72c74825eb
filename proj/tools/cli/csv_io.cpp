#include "csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

namespace tpb::cli {
namespace {

double parse_double(const std::string& field, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw CsvError(path.string() + ":" + std::to_string(line) + ": cannot parse number '" + field + "'");
  }
  return v;
}

}  // namespace

void append_number(std::string& out, double v, int precision) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  if (ec != std::errc()) throw CsvError("number formatting failed");
  out.append(buf, ptr);
}

void write_grid_csv(std::ostream& out, const GridField& g, int precision, const std::string& name,
                    double t_scale, double x_scale) {
  std::string text = "t,x," + name + "\n";
  for (int j = 0; j < g.m_t(); ++j) {
    for (int i = 0; i < g.m_x(); ++i) {
      append_number(text, t_scale * g.t(j), precision);
      text += ',';
      append_number(text, x_scale * g.x(i), precision);
      text += ',';
      append_number(text, g.values(j, i), precision);
      text += '\n';
    }
  }
  out << text;
}

void write_grid_csv(const std::filesystem::path& path, const GridField& g, int precision,
                    const std::string& name, double t_scale, double x_scale) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot write '" + path.string() + "'");
  write_grid_csv(out, g, precision, name, t_scale, x_scale);
}

GridField read_grid_csv(const std::filesystem::path& path, Basis basis) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path.string() + ": empty file");
  if (line.rfind("t,x,", 0) != 0) throw CsvError(path.string() + ":1: header must start with 't,x,'");

  std::vector<double> ts, xs, us;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw CsvError(path.string() + ":" + std::to_string(line_no) + ": expected three columns");
    }
    ts.push_back(parse_double(line.substr(0, c1), path, line_no));
    xs.push_back(parse_double(line.substr(c1 + 1, c2 - c1 - 1), path, line_no));
    us.push_back(parse_double(line.substr(c2 + 1), path, line_no));
  }
  if (ts.empty()) throw CsvError(path.string() + ": no data rows");

  std::size_t m_x = 1;
  while (m_x < ts.size() && ts[m_x] == ts[0]) ++m_x;
  if (ts.size() % m_x != 0) throw CsvError(path.string() + ": rows do not form a full grid");
  const std::size_t m_t = ts.size() / m_x;

  GridField g;
  g.basis = basis;
  g.values.resize(static_cast<Eigen::Index>(m_t), static_cast<Eigen::Index>(m_x));
  for (std::size_t j = 0; j < m_t; ++j) {
    for (std::size_t i = 0; i < m_x; ++i) {
      const std::size_t k = j * m_x + i;
      const double t = time_node(static_cast<int>(j), static_cast<int>(m_t));
      const double x = space_node(static_cast<int>(i), static_cast<int>(m_x), basis);
      if (std::abs(ts[k] - t) > 1e-9 || std::abs(xs[k] - x) > 1e-9) {
        throw CsvError(path.string() + ":" + std::to_string(k + 2) + ": node (" + std::to_string(ts[k]) +
                       ", " + std::to_string(xs[k]) + ") is not on the " + to_string(basis) + " grid");
      }
      g.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = us[k];
    }
  }
  return g;
}

}  // namespace tpb::cli
