#pragma once

#include <cstddef>
#include <ostream>

namespace slr {

using Coord = std::ptrdiff_t;

/// Global position in a grid. One-dimensional grids use `row` only and
/// keep `col` at zero.
struct Index {
  Coord row = 0;
  Coord col = 0;

  friend constexpr bool operator==(const Index&, const Index&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Index& idx) {
  return os << '(' << idx.row << ',' << idx.col << ')';
}

}  // namespace slr
