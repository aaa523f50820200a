#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "slr/grid.hpp"

namespace slr::io {

enum class PgmFormat { Ascii, Binary };

/// Parses a P2 or P5 grayscale image with maxval <= 255 into a rows x cols
/// grid. Throws ParseError carrying the byte offset of the problem.
Grid<std::uint8_t> parse_pgm(std::string_view bytes);

/// Serializes a 2D grid (1D grids become a single column) as P2 or P5 with
/// maxval 255.
std::string format_pgm(const Grid<std::uint8_t>& img, PgmFormat format = PgmFormat::Binary);

Grid<std::uint8_t> read_pgm(const std::filesystem::path& path);
void write_pgm(const Grid<std::uint8_t>& img, const std::filesystem::path& path,
               PgmFormat format = PgmFormat::Binary);

}  // namespace slr::io
