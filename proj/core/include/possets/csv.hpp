#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "possets/types.hpp"

namespace possets {

/// Numeric CSV table: comma-separated, decimal-point format, optional
/// header row (detected by non-numeric tokens in the first line).
struct CsvTable {
  std::vector<std::string> header;  // empty when the file had none
  Mat values;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Mat& values);

}  // namespace possets
