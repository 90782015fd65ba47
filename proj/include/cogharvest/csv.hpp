#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cogharvest {

/// 17 significant digits ("%.17g").
std::string format_real(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws InvalidArgument when the row width differs from the header.
  void add_row(std::vector<double> row);
  std::string to_string() const;
};

std::ostream& operator<<(std::ostream& os, const CsvTable& table);

}  // namespace cogharvest
