#include "csv.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace wsr {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return out.str();
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::row(std::initializer_list<Cell> cells) { row(std::vector<Cell>(cells)); }

void CsvTable::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("csv row width mismatch");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) body_ << ',';
    std::visit(
        [this](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            body_ << format_double(v);
          } else {
            body_ << v;
          }
        },
        cells.begin()[k]);
  }
  body_ << '\n';
}

std::string CsvTable::str() const {
  std::ostringstream out;
  out << "# schema_version=" << kSchemaVersion << '\n';
  for (std::size_t k = 0; k < columns_.size(); ++k) out << (k ? "," : "") << columns_[k];
  out << '\n' << body_.str();
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << str();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace wsr
