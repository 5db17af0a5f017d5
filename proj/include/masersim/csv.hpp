// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_CSV_HPP
#define MASERSIM_CSV_HPP

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace masersim {

// Shortest round-trip decimal text for a double; deterministic across runs.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Period decimal separator, comma delimiter, one header row.
void write_csv(const std::string& path, const CsvTable& table);

// Reads a two-column numeric CSV; a non-numeric first line is treated as a
// header. Comma or whitespace delimited.
std::pair<std::vector<double>, std::vector<double>> read_xy_csv(const std::string& path);

}  // namespace masersim

#endif
