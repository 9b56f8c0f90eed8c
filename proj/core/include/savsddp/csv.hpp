#pragma once

#include <string>
#include <vector>

namespace savsddp {

/// Shortest round-trip decimal rendering of a double ("103.92", not
/// "103.92000000000001"); deterministic, so repeated runs produce
/// byte-identical files.
std::string format_double(double v);

/// Minimal CSV builder: header row mandatory, UTF-8, '\n' line endings.
/// write_atomic stages the file next to the target and renames it into place.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);

  std::string str() const;
  void write_atomic(const std::string& path) const;

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace savsddp
