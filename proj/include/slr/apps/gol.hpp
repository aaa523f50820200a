#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "slr/functionals.hpp"
#include "slr/grid.hpp"
#include "slr/loop.hpp"
#include "slr/neighborhood.hpp"

namespace slr::apps {

using Cell = std::uint8_t;
using Liveness = std::uint64_t;

struct GolConfig {
  std::size_t rows = 64;
  std::size_t cols = 64;
  std::size_t steps = 100;
};

/// Next state of the center cell; absent neighbors count as dead.
inline Cell gol_rule(const Neighborhood<Cell>& nb) {
  int alive = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      alive += nb.rel(dr, dc).value_or(0);
    }
  }
  return (alive == 3 || (nb.center() && alive == 2)) ? 1 : 0;
}

inline auto liveness() { return sum<Liveness>(); }

void require_binary(const Grid<Cell>& seed);

/// Bernoulli(density) grid of 0/1 cells from a fixed seed.
Grid<Cell> random_life(std::size_t rows, std::size_t cols, std::uint64_t seed,
                       double density = 0.35);

/// Game of Life as a loop of stencil-reduce: radius 1, sum of live cells
/// fed to the condition.
template <typename Pred, typename Exec = SequentialExecutor<Cell>>
LoopResult<Cell, Liveness> game_of_life(const Grid<Cell>& seed, const Condition<Pred>& cond,
                                        Exec&& exec = Exec{}) {
  require_binary(seed);
  return loop_stencil_reduce(1, gol_rule, liveness(), cond, seed, NoEnv{},
                             std::forward<Exec>(exec));
}

template <typename Exec = SequentialExecutor<Cell>>
LoopResult<Cell, Liveness> game_of_life(const Grid<Cell>& seed, std::size_t steps,
                                        Exec&& exec = Exec{}) {
  return game_of_life(seed, after_iterations(steps), std::forward<Exec>(exec));
}

}  // namespace slr::apps
