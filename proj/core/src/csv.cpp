#include "possets/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace possets {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end != nullptr && *end == '\0';
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  size_t width = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (size_t i = 0; i < fields.size(); ++i)
      if (!parse_number(fields[i], row[i])) {
        numeric = false;
        break;
      }
    if (first) {
      first = false;
      width = fields.size();
      if (!numeric) {
        table.header = fields;
        continue;
      }
    }
    if (!numeric) throw domain_error("read_csv: non-numeric data row: " + line);
    if (fields.size() != width)
      throw domain_error("read_csv: inconsistent column count");
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < width; ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("read_csv: cannot open " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Mat& values) {
  if (!header.empty()) {
    for (size_t i = 0; i < header.size(); ++i)
      out << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
  const std::streamsize prec = out.precision();
  out.precision(12);
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      out << values(i, j) << (j + 1 < values.cols() ? ',' : '\n');
  out.precision(prec);
}

}  // namespace possets
