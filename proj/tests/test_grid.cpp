#include <doctest.h>

#include "slr/grid.hpp"
#include "slr/neighborhood.hpp"

using namespace slr;

TEST_CASE("grid_new fills every element") {
  const auto g = grid_new<int>({3}, 7);
  CHECK(g.rank() == 1);
  CHECK(g == Grid<int>{7, 7, 7});
  const auto z = grid_new<int>({2, 2}, 0);
  CHECK(z.rows() == 2);
  CHECK(z.cols() == 2);
  for (int v : z.data()) CHECK(v == 0);
}

TEST_CASE("grid_new rejects degenerate shapes") {
  CHECK_THROWS_AS(grid_new<int>({0}, 1), ShapeError);
  CHECK_THROWS_AS(grid_new<int>({2, 0}, 1), ShapeError);
  CHECK_THROWS_AS(grid_new<int>({}, 1), ShapeError);
  CHECK_THROWS_AS(grid_new<int>({2, 2, 2}, 1), ShapeError);
}

TEST_CASE("padded reads return nothing outside the grid") {
  const Grid<int> g{1, 2, 3};
  CHECK(grid_get_padded(g, {1}) == 2);
  CHECK_FALSE(grid_get_padded(g, {-1}).has_value());
  CHECK_FALSE(grid_get_padded(g, {3}).has_value());
  CHECK_THROWS_AS(grid_get_padded(g, {0, 0}), ShapeError);

  const auto m = Grid<int>::matrix({{1, 2}, {3, 4}});
  CHECK(grid_get_padded(m, {1, 0}) == 3);
  CHECK_FALSE(grid_get_padded(m, {0, 2}).has_value());
}

TEST_CASE("1D neighborhoods") {
  const Grid<int> g{1, 2, 3};
  using V = std::vector<std::optional<int>>;
  CHECK(neighborhood_at(g, {0, 0}, 1).entries == V{std::nullopt, 1, 2});
  CHECK(neighborhood_at(g, {1, 0}, 1).entries == V{1, 2, 3});
  CHECK(neighborhood_at(g, {2, 0}, 0).entries == V{3});
  CHECK_THROWS_AS(neighborhood_at(g, {3, 0}, 1), ShapeError);
}

TEST_CASE("2D corner neighborhood is padded on top and left") {
  const auto g = Grid<int>::matrix({{1, 2}, {3, 4}});
  using V = std::vector<std::optional<int>>;
  const auto nb = neighborhood_at(g, {0, 0}, 1);
  const auto n = std::nullopt;
  CHECK(nb.entries == V{n, n, n, n, 1, 2, n, 3, 4});
}

TEST_CASE("neighborhood access outside the radius is rejected") {
  const auto g = Grid<int>::matrix({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  const auto view = PlaneView<int>::of(g);
  const Neighborhood<int> nb(view, {1, 1}, 1);
  CHECK(nb.center() == 5);
  CHECK(nb.rel(-1, 1) == 3);
  CHECK(nb.at(2, 0) == 7);
  CHECK_THROWS_AS(nb.rel(2, 0), std::out_of_range);
  CHECK_THROWS_AS(nb.rel(1), ShapeError);
  CHECK(nb.global_index(0, 0) == Index{0, 0});

  const IndexedNeighborhood<int> inb(nb);
  const auto east = inb.rel(0, 1);
  REQUIRE(east.has_value());
  CHECK(east->value == 6);
  CHECK(east->index == Index{1, 2});
}

TEST_CASE("row-major layout") {
  auto g = grid_new<int>({2, 3}, 0);
  g(1, 2) = 9;
  CHECK(g[5] == 9);
  CHECK(g.index_of(5) == Index{1, 2});
  CHECK(g.at({1, 2}) == 9);
  CHECK_THROWS(g.at({2, 0}));
}
