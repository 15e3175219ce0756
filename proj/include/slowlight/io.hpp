#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace slowlight {

// Numbers are serialized with 9 significant digits.
std::string format_number(double x);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

void write_text(const std::filesystem::path& path, const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// Minimal multi-series SVG line plot.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<double>& x,
                    const std::vector<std::pair<std::string, std::vector<double>>>& series);

}  // namespace slowlight
