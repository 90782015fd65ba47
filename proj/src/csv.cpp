#include "cogharvest/csv.hpp"

#include <cstdio>

#include "cogharvest/error.hpp"

namespace cogharvest {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != header.size()) throw InvalidArgument("CSV row width does not match the header");
  rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_real(row[i]);
    out += '\n';
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const CsvTable& table) { return os << table.to_string(); }

}  // namespace cogharvest
