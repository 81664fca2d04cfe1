#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cpphase {

// Shortest-looking text for a real at 17 significant digits; "inf", "-inf",
// "nan" for non-finite values.
std::string format_real(double x);

using CsvCell = std::variant<std::int64_t, std::uint64_t, double, std::string, bool>;

// CSV with `# key=value` header lines followed by one column-name line.
// Column order is fixed at construction.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void meta(std::string key, std::string value) { meta_.emplace_back(std::move(key), std::move(value)); }
  void row(std::vector<CsvCell> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<CsvCell>> rows_;
};

// Real for JSON: non-finite values become null.
nlohmann::json json_real(double x);

// Writes `content` to `path` atomically enough for a single writer; throws
// IoError naming the path.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string dump_json(const nlohmann::json& j);

// UTC timestamp taken from SOURCE_DATE_EPOCH when set, otherwise the clock.
std::string manifest_timestamp();

}  // namespace cpphase
