#pragma once

#include <vector>

#include "oracles/gol_oracle.hpp"
#include "slr/apps/gol.hpp"
#include "slr/grid.hpp"

namespace testing {

inline oracle::Board to_board(const slr::Grid<slr::apps::Cell>& g) {
  oracle::Board b(g.rows(), std::vector<int>(g.cols()));
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) b[r][c] = g(r, c);
  return b;
}

inline slr::Grid<slr::apps::Cell> from_board(const oracle::Board& b) {
  slr::Grid<slr::apps::Cell> g({b.size(), b[0].size()}, 0);
  for (std::size_t r = 0; r < b.size(); ++r)
    for (std::size_t c = 0; c < b[0].size(); ++c) g(r, c) = static_cast<slr::apps::Cell>(b[r][c]);
  return g;
}

inline slr::Grid<slr::apps::Cell> board(std::size_t rows, std::size_t cols,
                                        std::initializer_list<std::pair<int, int>> alive) {
  slr::Grid<slr::apps::Cell> g({rows, cols}, 0);
  for (auto [r, c] : alive) g(r, c) = 1;
  return g;
}

}  // namespace testing
