#pragma once

// Text output helpers shared by the exporters and the CLI. Numbers use the
// shortest round-trip representation, so CSV and JSON files are byte-stable
// and parse back to the exact doubles.

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qbm::io {

std::string format_double(double v);

// RFC-4180 rows with LF line endings; fields are quoted only when needed.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> names);
  CsvWriter& field(std::string_view s);
  CsvWriter& field(double v);
  CsvWriter& field(std::int64_t v);
  CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
  CsvWriter& field(std::size_t v) { return field(static_cast<std::int64_t>(v)); }
  void end_row();

 private:
  void separator();
  std::ostream& out_;
  bool first_ = true;
};

// Minimal reader for the files CsvWriter produces: first row is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace qbm::io
