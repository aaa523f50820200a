#include "slr/apps/gol.hpp"

#include <random>
#include <vector>

namespace slr::apps {

void require_binary(const Grid<Cell>& seed) {
  for (std::size_t i = 0; i < seed.size(); ++i) {
    if (seed[i] > 1) {
      const Index at = seed.index_of(i);
      throw ConfigError("game of life cells must be 0 or 1; found " + std::to_string(seed[i]) +
                        " at (" + std::to_string(at.row) + "," + std::to_string(at.col) + ")");
    }
  }
}

Grid<Cell> random_life(std::size_t rows, std::size_t cols, std::uint64_t seed, double density) {
  std::mt19937_64 rng(seed);
  std::vector<Cell> cells(rows * cols);
  for (auto& c : cells) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    c = u < density ? 1 : 0;
  }
  return Grid<Cell>({rows, cols}, std::move(cells));
}

}  // namespace slr::apps
