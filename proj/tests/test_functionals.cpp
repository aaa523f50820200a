#include <doctest.h>

#include <limits>
#include <random>

#include "oracles/stencil_oracle.hpp"
#include "slr/functionals.hpp"
#include "support.hpp"

using namespace slr;

namespace {

int sum_present(const Neighborhood<int>& nb) {
  int s = 0;
  for (const auto& v : nb.entries()) s += v.value_or(0);
  return s;
}

}  // namespace

TEST_CASE("apply_to_all") {
  CHECK(apply_to_all([](int x) { return x + 1; }, Grid<int>{1, 2, 3}) == Grid<int>{2, 3, 4});
  const auto m = Grid<int>::matrix({{1, 2}, {3, 4}});
  CHECK(apply_to_all([](int x) { return x; }, m) == m);
  CHECK(apply_to_all([](int x) { return x * x; }, m) == Grid<int>::matrix({{1, 4}, {9, 16}}));
  CHECK(map_pattern([](int x) { return x * 2.5; }, m)(1, 1) == 10.0);
}

TEST_CASE("reduce_all") {
  Grid<int> ten({10}, 0);
  for (int i = 0; i < 10; ++i) ten[i] = i + 1;
  CHECK(reduce_all(sum<long>(), ten) == 55);
  CHECK(reduce_all(maximum<int>(), Grid<int>::matrix({{3, 1}, {4, 1}})) == 4);
  CHECK(reduce_all(sum<int>(), Grid<int>{42}) == 42);
  CHECK(reduce_pattern(minimum<int>(), Grid<int>{5, -2, 9}) == -2);
  const Combinator first_wins{[](int a, int) { return a; }, 0};
  CHECK(reduce_all(first_wins, Grid<int>{5, 6}) == 0);
}

TEST_CASE("combinator identities") {
  const std::vector<int> xs{-5, 0, 3, 1000};
  CHECK(identity_holds(sum<int>(), std::span<const int>(xs)));
  CHECK(identity_holds(maximum<int>(), std::span<const int>(xs)));
  CHECK(identity_holds(minimum<int>(), std::span<const int>(xs)));
  CHECK(maximum<double>().identity == -std::numeric_limits<double>::infinity());
}

TEST_CASE("stencil_apply sums present neighbors") {
  CHECK(stencil_apply(sum_present, 1, Grid<int>{1, 1, 1}) == Grid<int>{2, 3, 2});
}

TEST_CASE("stencil_apply with a projection copies the input") {
  const auto m = Grid<int>::matrix({{1, 2, 3}, {4, 5, 6}});
  for (int k : {0, 1, 3}) {
    CHECK(stencil_apply([](const Neighborhood<int>& nb) { return nb.center(); }, k, m) == m);
  }
}

TEST_CASE("blinker flips under one GoL step") {
  const auto row = testing::board(3, 3, {{1, 0}, {1, 1}, {1, 2}});
  const auto col = testing::board(3, 3, {{0, 1}, {1, 1}, {2, 1}});
  const auto next = stencil_apply(apps::gol_rule, 1, row);
  CHECK(next == col);
  CHECK(testing::to_board(next) == oracle::life_step(testing::to_board(row)));
}

TEST_CASE("GoL step agrees with the nested-vector oracle on random boards") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = apps::random_life(17, 23, seed);
    CHECK(testing::to_board(stencil_apply(apps::gol_rule, 1, g)) ==
          oracle::life_step(testing::to_board(g)));
  }
}

TEST_CASE("stencil_apply agrees with the reference sweep for random kernels") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = static_cast<int>(rng() % 3);
    const std::size_t rows = 1 + rng() % 9, cols = 1 + rng() % 9;
    Grid<long> g({rows, cols}, 0);
    for (auto& v : g.data()) v = static_cast<long>(rng() % 21) - 10;
    const long w_missing = static_cast<long>(rng() % 5);

    auto f = [k, w_missing](const Neighborhood<long>& nb) {
      long s = 0, pos = 1;
      for (const auto& v : nb.entries()) s += (v ? *v * pos : w_missing), ++pos;
      (void)k;
      return s % 1000;
    };
    auto ref = [w_missing](const oracle::Window& w) {
      long s = 0, pos = 1;
      for (const auto& v : w) s += (v ? *v * pos : w_missing), ++pos;
      return s % 1000;
    };
    oracle::Plane plane(rows, std::vector<long>(cols));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) plane[r][c] = g(r, c);
    const auto expect = oracle::stencil_step(plane, k, ref);
    const auto got = stencil_apply(f, k, g);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) CHECK(got(r, c) == expect[r][c]);
  }
}

TEST_CASE("stencil_apply_indexed exposes global indices") {
  const Grid<int> a({3, 2}, 0);
  auto row_of = [](const IndexedNeighborhood<int>& nb) {
    return static_cast<int>(nb.center().index.row);
  };
  CHECK(stencil_apply_indexed(row_of, 1, a) == Grid<int>::matrix({{0, 0}, {1, 1}, {2, 2}}));

  auto plus_index = [](const IndexedNeighborhood<int>& nb) {
    const auto c = nb.center();
    return c.value + static_cast<int>(c.index.row + c.index.col);
  };
  CHECK(stencil_apply_indexed(plus_index, 0, Grid<int>({2, 2}, 0)) ==
        Grid<int>::matrix({{0, 1}, {1, 2}}));
}

TEST_CASE("environment is read alongside the neighborhood") {
  const Grid<int> a{1, 2, 3};
  const Grid<int> aux{10, 20, 30};
  const Env<int> env(aux);
  auto f = [](const Neighborhood<int>& nb, const Env<int>& e) {
    return nb.center() + e(nb.center_index());
  };
  CHECK(stencil_apply(f, 0, a, env) == Grid<int>{11, 22, 33});
  CHECK_THROWS_AS(stencil_apply(f, 0, a, Env<int>(Grid<int>{1, 2})), ShapeError);
}

TEST_CASE("elemental failures carry the index") {
  const auto m = Grid<int>::matrix({{1, 2}, {3, 4}});
  auto boom = [](const Neighborhood<int>& nb) -> int {
    if (nb.center() == 3) throw std::runtime_error("bad cell");
    return 0;
  };
  try {
    stencil_apply(boom, 1, m);
    FAIL("expected a KernelError");
  } catch (const KernelError& e) {
    CHECK(e.index() == Index{1, 0});
    CHECK(std::string(e.what()).find("bad cell") != std::string::npos);
  }
}

TEST_CASE("a negative radius is a configuration error") {
  CHECK_THROWS_AS(stencil_apply(sum_present, -1, Grid<int>{1}), ConfigError);
}
