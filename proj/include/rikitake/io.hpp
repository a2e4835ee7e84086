#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rikitake/integrate.hpp"

namespace rikitake::io {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws ContractError when absent
};

/// Header t,<coords>,<invariants>; extra columns, if any, follow in order.
CsvTable trajectory_table(const Trajectory& traj);
void append_column(CsvTable& table, const std::string& name, const std::vector<double>& values);

void write_csv(const CsvTable& table, const std::filesystem::path& path);
CsvTable read_csv(const std::filesystem::path& path);

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> xs, ys;
};

/// Self-contained polyline plot on a fixed viewBox, scaled to the data with a 5% margin.
std::string svg_plot(const std::vector<SvgSeries>& series, const std::string& x_label, const std::string& y_label,
                     const std::string& title);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Figure colors in caption order.
const std::vector<std::string>& figure_colors();

/// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace rikitake::io
