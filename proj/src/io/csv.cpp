#include "slr/io/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <tuple>

#include "slr/errors.hpp"

namespace slr::io {

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string format_csv(std::vector<BenchRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.input, a.partitions, a.width, a.mode) <
           std::tie(b.input, b.partitions, b.width, b.mode);
  });
  std::string out = kBenchHeader;
  out += "\r\n";
  for (const auto& r : rows) {
    out += csv_field(r.app) + ',' + csv_field(r.input) + ',' + std::to_string(r.partitions) +
           ',' + std::to_string(r.width) + ',' + csv_field(r.mode) + ',' +
           std::to_string(r.iterations) + ',' + csv_number(r.wall_ms) + ',' +
           std::to_string(r.fill_events) + ',' + std::to_string(r.halo_elems) + ',' +
           std::to_string(r.readback_events) + ',' + csv_number(r.reduce_final) + ',' +
           std::to_string(r.seed) + "\r\n";
  }
  return out;
}

void emit_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write csv " + path.string());
  const std::string text = format_csv(rows);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw IoError("write failed for csv " + path.string());
}

}  // namespace slr::io
