#pragma once

#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "maglat/errors.hpp"

namespace maglat::csv {

// Writes equal-length columns under a header row.
inline void write_columns(const std::string& path,
                          const std::vector<std::string>& names,
                          const std::vector<std::vector<double>>& cols) {
  if (names.size() != cols.size() || cols.empty())
    throw InvariantError("csv: header/column count mismatch");
  for (const auto& c : cols)
    if (c.size() != cols.front().size())
      throw InvariantError("csv: ragged columns");
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << std::setprecision(12);
  for (std::size_t j = 0; j < names.size(); ++j)
    out << names[j] << (j + 1 < names.size() ? "," : "\n");
  for (std::size_t i = 0; i < cols.front().size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out << cols[j][i] << (j + 1 < cols.size() ? "," : "\n");
}

}  // namespace maglat::csv
