#include "ddpo/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace ddpo {

std::string format_double(double v) {
  char buf[40];
  // shortest representation that still round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == v || (std::isnan(back) && std::isnan(v))) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::columns(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out_ << ',';
    out_ << names[i];
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_double(values[i]);
  }
  out_ << "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

void write_events_json(const std::filesystem::path& path,
                       const std::vector<DivergenceEvent>& events) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : events) {
    arr.push_back({{"time", e.time}, {"parameter", e.parameter}, {"kind", e.kind}});
  }
  write_text_file(path, arr.dump(2) + "\n");
}

void write_pgm(const std::filesystem::path& path,
               const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("write_pgm: empty matrix");
  std::size_t h = rows.size(), w = rows.front().size();
  double peak = 0;
  for (const auto& r : rows)
    for (double v : r) peak = std::max(peak, v);
  if (peak <= 0) peak = 1;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "P5\n" << w << " " << h << "\n255\n";
  std::vector<unsigned char> line(w);
  for (const auto& r : rows) {
    if (r.size() != w) throw std::invalid_argument("write_pgm: ragged matrix");
    for (std::size_t j = 0; j < w; ++j) {
      double v = std::clamp(r[j] / peak, 0.0, 1.0);
      line[j] = static_cast<unsigned char>(std::lround(255.0 * v));
    }
    out.write(reinterpret_cast<const char*>(line.data()), static_cast<std::streamsize>(w));
  }
}

}  // namespace ddpo
