#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ddpo/flows.hpp"

namespace ddpo {

/// Shortest round-trip decimal form of v (printf %.17g trimmed); identical
/// inputs always print identically.
std::string format_double(double v);

/// CSV with '#' comment headers (units) and full-precision numeric rows.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void comment(const std::string& text);
  void columns(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);

void write_events_json(const std::filesystem::path& path,
                       const std::vector<DivergenceEvent>& events);

/// 8-bit binary PGM of a row-major matrix, normalized to its maximum.
void write_pgm(const std::filesystem::path& path,
               const std::vector<std::vector<double>>& rows);

}  // namespace ddpo
