#pragma once

#include <filesystem>
#include <initializer_list>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace wsr {

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<double, long long, std::string>;

std::string format_double(double v);

/// Buffers a table and writes it with a schema comment line and a header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void row(std::initializer_list<Cell> cells);
  void row(const std::vector<Cell>& cells);
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::ostringstream body_;
};

}  // namespace wsr
