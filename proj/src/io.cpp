#include "slowlight/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slowlight/errors.hpp"

namespace slowlight {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size())
    throw ValidationError("write_csv: header/column count mismatch");
  std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows)
      throw ValidationError("write_csv: ragged columns");

  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (std::size_t j = 0; j < header.size(); ++j)
    out << (j ? "," : "") << header[j];
  out << "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      out << (j ? "," : "") << format_number(columns[j][i]);
    out << "\n";
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return columns[j];
  throw ValidationError("CSV column '" + name + "' not found");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV '" + path.string() + "'");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  table.columns.resize(table.header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= table.columns.size())
        throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                              ": too many cells");
      try {
        table.columns[j].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                              ": '" + cell + "' is not a number");
      }
      ++j;
    }
    if (j != table.columns.size())
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": short row");
  }
  return table;
}

void write_svg_plot(
    const std::filesystem::path& path, const std::string& title,
    const std::string& x_label, const std::string& y_label,
    const std::vector<double>& x,
    const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  if (x.empty() || series.empty())
    throw ValidationError("write_svg_plot: nothing to plot");
  const int width = 800, height = 500;
  const int ml = 70, mr = 20, mt = 40, mb = 50;

  double x_min = x.front(), x_max = x.front();
  for (double v : x) {
    x_min = std::min(x_min, v);
    x_max = std::max(x_max, v);
  }
  double y_min = series.front().second.front(), y_max = y_min;
  for (const auto& [label, ys] : series) {
    if (ys.size() != x.size())
      throw ValidationError("write_svg_plot: series length mismatch");
    for (double v : ys) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const auto px = [&](double v) {
    return ml + (v - x_min) / (x_max - x_min) * (width - ml - mr);
  };
  const auto py = [&](double v) {
    return height - mb - (v - y_min) / (y_max - y_min) * (height - mt - mb);
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='" << width / 2 << "' y='24' text-anchor='middle' "
         "font-size='16'>" << title << "</text>\n";
  svg << "<rect x='" << ml << "' y='" << mt << "' width='" << width - ml - mr
      << "' height='" << height - mt - mb
      << "' fill='none' stroke='black'/>\n";
  svg << "<text x='" << width / 2 << "' y='" << height - 12
      << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n";
  svg << "<text x='18' y='" << height / 2
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
      << height / 2 << ")'>" << y_label << "</text>\n";
  svg << "<text x='" << ml << "' y='" << height - mb + 18
      << "' font-size='11'>" << format_number(x_min) << "</text>\n";
  svg << "<text x='" << width - mr << "' y='" << height - mb + 18
      << "' text-anchor='end' font-size='11'>" << format_number(x_max)
      << "</text>\n";
  svg << "<text x='" << ml - 6 << "' y='" << height - mb
      << "' text-anchor='end' font-size='11'>" << format_number(y_min)
      << "</text>\n";
  svg << "<text x='" << ml - 6 << "' y='" << mt + 10
      << "' text-anchor='end' font-size='11'>" << format_number(y_max)
      << "</text>\n";

  int si = 0;
  for (const auto& [label, ys] : series) {
    const char* color = colors[si % 6];
    svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(ys[i])) continue;
      svg << format_number(px(x[i])) << "," << format_number(py(ys[i])) << " ";
    }
    svg << "'/>\n";
    svg << "<text x='" << width - mr - 10 << "' y='" << mt + 18 + 16 * si
        << "' text-anchor='end' font-size='12' fill='" << color << "'>"
        << label << "</text>\n";
    ++si;
  }
  svg << "</svg>\n";
  write_text(path, svg.str());
}

}  // namespace slowlight
