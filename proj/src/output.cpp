#include "cpphase/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "cpphase/error.hpp"

namespace cpphase {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::row(std::vector<CsvCell> cells) {
  if (cells.size() != columns_.size())
    throw Error("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                std::to_string(columns_.size()));
  rows_.push_back(std::move(cells));
}

namespace {

std::string cell_text(const CsvCell& c) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(bool v) const { return v ? "1" : "0"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

void CsvTable::write(std::ostream& out) const {
  for (const auto& [k, v] : meta_) out << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell_text(r[i]);
    out << '\n';
  }
}

std::string CsvTable::str() const {
  std::ostringstream s;
  write(s);
  return s.str();
}

nlohmann::json json_real(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string manifest_timestamp() {
  std::time_t t = 0;
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH"); e && *e) {
    t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace cpphase
