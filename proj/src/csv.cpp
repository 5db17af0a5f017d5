// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include "masersim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "masersim/errors.hpp"

namespace masersim {

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) os << ',';
    os << table.header[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

std::pair<std::vector<double>, std::vector<double>> read_xy_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("read_xy_csv: cannot open " + path);
  std::vector<double> xs, ys;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ss(line);
    double a, b;
    if (ss >> a >> b) {
      xs.push_back(a);
      ys.push_back(b);
    } else if (!first && !line.empty() && line.find_first_not_of(" \r\n") != std::string::npos) {
      throw ValidationError("read_xy_csv: malformed data line in " + path);
    }
    first = false;
  }
  if (xs.size() < 2) throw ValidationError("read_xy_csv: need at least two rows in " + path);
  return {xs, ys};
}

}  // namespace masersim
