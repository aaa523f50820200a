#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace slr::io {

/// One benchmark measurement: a single input item run under one
/// partitions / farm-width / deployment-mode configuration.
struct BenchRow {
  std::string app;
  std::string input;
  std::uint64_t partitions = 1;
  std::uint64_t width = 1;
  std::string mode = "1:1";
  std::uint64_t iterations = 0;
  double wall_ms = 0.0;
  std::uint64_t fill_events = 0;
  std::uint64_t halo_elems = 0;
  std::uint64_t readback_events = 0;
  double reduce_final = 0.0;
  std::uint64_t seed = 42;
};

inline constexpr const char* kBenchHeader =
    "app,input,partitions,width,mode,iterations,wall_ms,fill_events,halo_elems,"
    "readback_events,reduce_final,seed";

/// Quotes a field when it contains a comma, quote, CR or LF; embedded
/// quotes are doubled.
std::string csv_field(const std::string& value);

/// Six significant digits, `%g` style.
std::string csv_number(double value);

/// Header plus rows ordered by (input, partitions, width, mode); rows that
/// tie keep their relative order.
std::string format_csv(std::vector<BenchRow> rows);

void emit_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path);

}  // namespace slr::io
