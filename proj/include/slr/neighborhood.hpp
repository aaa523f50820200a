#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slr/errors.hpp"
#include "slr/grid.hpp"
#include "slr/index.hpp"

namespace slr {

/// Read-only window onto a row band of a (possibly partitioned) grid.
///
/// `data` holds `buffer_rows` rows of `cols` elements whose first row is
/// global row `first_row`. Global bounds (`global_rows` x `cols`) decide
/// which positions are absent; the band only has to cover the rows a
/// stencil of the declared radius can reach.
template <typename T>
struct PlaneView {
  const T* data = nullptr;
  Coord first_row = 0;
  std::size_t buffer_rows = 0;
  std::size_t cols = 1;
  std::size_t global_rows = 0;
  int rank = 2;

  static PlaneView of(const Grid<T>& g) {
    return {g.data().data(), 0, g.rows(), g.cols(), g.rows(), g.rank()};
  }

  bool in_bounds(Coord row, Coord col) const noexcept {
    return row >= 0 && row < static_cast<Coord>(global_rows) && col >= 0 &&
           col < static_cast<Coord>(cols);
  }

  const T& value(Coord row, Coord col) const noexcept {
    return data[static_cast<std::size_t>(row - first_row) * cols + static_cast<std::size_t>(col)];
  }
};

/// The (2k+1)^n window around one element. Slots outside the grid are
/// absent and read as nullopt; slots outside the declared radius cannot be
/// read at all.
template <typename T>
class Neighborhood {
 public:
  Neighborhood(const PlaneView<T>& view, Index center, int radius)
      : view_(&view), center_(center), k_(radius) {}

  int radius() const noexcept { return k_; }
  int rank() const noexcept { return view_->rank; }
  Index center_index() const noexcept { return center_; }
  std::size_t extent() const noexcept { return static_cast<std::size_t>(2 * k_ + 1); }
  std::size_t size() const noexcept { return rank() == 1 ? extent() : extent() * extent(); }

  const T& center() const noexcept { return view_->value(center_.row, center_.col); }

  /// Slot at local offset j in [0, 2k] (1D grids).
  std::optional<T> at(int j) const {
    require_rank(1);
    check_local(j);
    return fetch(center_.row - k_ + j, 0);
  }

  /// Slot at local offset (j1, j2), each in [0, 2k] (2D grids).
  std::optional<T> at(int j1, int j2) const {
    require_rank(2);
    check_local(j1);
    check_local(j2);
    return fetch(center_.row - k_ + j1, center_.col - k_ + j2);
  }

  /// Slot displaced by d in [-k, k] from the center (1D grids).
  std::optional<T> rel(int d) const { return at(d + k_); }

  /// Slot displaced by (d1, d2) from the center (2D grids).
  std::optional<T> rel(int d1, int d2) const { return at(d1 + k_, d2 + k_); }

  /// Global index covered by local slot (j1, j2); j2 is ignored for 1D.
  Index global_index(int j1, int j2 = 0) const noexcept {
    if (rank() == 1) return {center_.row - k_ + j1, 0};
    return {center_.row - k_ + j1, center_.col - k_ + j2};
  }

  /// All slots in row-major local order.
  std::vector<std::optional<T>> entries() const {
    std::vector<std::optional<T>> out;
    out.reserve(size());
    const int e = 2 * k_ + 1;
    if (rank() == 1) {
      for (int j = 0; j < e; ++j) out.push_back(at(j));
    } else {
      for (int j1 = 0; j1 < e; ++j1)
        for (int j2 = 0; j2 < e; ++j2) out.push_back(at(j1, j2));
    }
    return out;
  }

 private:
  void require_rank(int r) const {
    if (rank() != r) {
      throw ShapeError("neighborhood of a rank-" + std::to_string(rank()) + " grid accessed with " +
                       std::to_string(r) + " coordinate(s)");
    }
  }

  void check_local(int j) const {
    if (j < 0 || j > 2 * k_) {
      throw std::out_of_range("neighborhood offset " + std::to_string(j) +
                              " outside declared radius " + std::to_string(k_));
    }
  }

  std::optional<T> fetch(Coord row, Coord col) const {
    if (!view_->in_bounds(row, col)) return std::nullopt;
    return view_->value(row, col);
  }

  const PlaneView<T>* view_;
  Index center_;
  int k_;
};

template <typename T>
struct IndexedValue {
  T value;
  Index index;
};

/// Neighborhood whose present slots carry their global index alongside the
/// value.
template <typename T>
class IndexedNeighborhood {
 public:
  explicit IndexedNeighborhood(const Neighborhood<T>& base) : base_(&base) {}

  int radius() const noexcept { return base_->radius(); }
  int rank() const noexcept { return base_->rank(); }
  std::size_t size() const noexcept { return base_->size(); }
  Index center_index() const noexcept { return base_->center_index(); }

  IndexedValue<T> center() const { return {base_->center(), base_->center_index()}; }

  std::optional<IndexedValue<T>> at(int j) const { return pair(base_->at(j), j, 0); }
  std::optional<IndexedValue<T>> at(int j1, int j2) const {
    return pair(base_->at(j1, j2), j1, j2);
  }
  std::optional<IndexedValue<T>> rel(int d) const { return at(d + radius()); }
  std::optional<IndexedValue<T>> rel(int d1, int d2) const {
    return at(d1 + radius(), d2 + radius());
  }

  const Neighborhood<T>& values() const noexcept { return *base_; }

 private:
  std::optional<IndexedValue<T>> pair(std::optional<T> v, int j1, int j2) const {
    if (!v) return std::nullopt;
    return IndexedValue<T>{std::move(*v), base_->global_index(j1, j2)};
  }

  const Neighborhood<T>* base_;
};

/// Owning snapshot of the window around `center`, for inspection and tests.
/// Patterns hand elemental functions a `Neighborhood` view instead.
template <typename T>
struct NeighborhoodSnapshot {
  int radius = 0;
  Index center_index;
  std::vector<std::optional<T>> entries;
};

template <typename T>
NeighborhoodSnapshot<T> neighborhood_at(const Grid<T>& g, Index center, int k) {
  if (k < 0) throw ConfigError("stencil radius must be non-negative");
  if (!g.contains(center)) throw ShapeError("neighborhood center out of range");
  const auto view = PlaneView<T>::of(g);
  const Neighborhood<T> nb(view, center, k);
  return {k, center, nb.entries()};
}

}  // namespace slr
