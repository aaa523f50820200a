#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "slr/errors.hpp"
#include "slr/index.hpp"

namespace slr {

/// Dense one- or two-dimensional array stored row-major.
///
/// A 1D grid of length d is laid out as d rows of one column, so splitting
/// by rows is a contiguous split for both ranks.
template <typename T>
class Grid {
  static_assert(!std::is_same_v<T, bool>, "use std::uint8_t for boolean grids");

 public:
  using value_type = T;

  Grid() = default;

  Grid(std::vector<std::size_t> dims, const T& fill) : dims_(std::move(dims)) {
    validate_dims(dims_);
    data_.assign(product(dims_), fill);
  }

  Grid(std::vector<std::size_t> dims, std::vector<T> data)
      : dims_(std::move(dims)), data_(std::move(data)) {
    validate_dims(dims_);
    if (data_.size() != product(dims_)) {
      throw ShapeError("grid data length " + std::to_string(data_.size()) +
                       " does not match dims product " + std::to_string(product(dims_)));
    }
  }

  /// 1D grid from a list of values.
  Grid(std::initializer_list<T> values) : Grid({values.size()}, std::vector<T>(values)) {}

  /// 2D grid from nested rows; every row must have the same length.
  static Grid matrix(std::initializer_list<std::initializer_list<T>> rows) {
    const std::size_t nrows = rows.size();
    const std::size_t ncols = nrows == 0 ? 0 : rows.begin()->size();
    std::vector<T> data;
    data.reserve(nrows * ncols);
    for (const auto& row : rows) {
      if (row.size() != ncols) throw ShapeError("ragged rows in grid literal");
      data.insert(data.end(), row.begin(), row.end());
    }
    return Grid({nrows, ncols}, std::move(data));
  }

  int rank() const noexcept { return static_cast<int>(dims_.size()); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t rows() const noexcept { return dims_.empty() ? 0 : dims_[0]; }
  std::size_t cols() const noexcept { return dims_.size() == 2 ? dims_[1] : 1; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  T& operator[](std::size_t flat) { return data_[flat]; }
  const T& operator[](std::size_t flat) const { return data_[flat]; }

  T& operator()(std::size_t r, std::size_t c = 0) { return data_[r * cols() + c]; }
  const T& operator()(std::size_t r, std::size_t c = 0) const { return data_[r * cols() + c]; }

  const T& at(Index idx) const {
    if (!contains(idx)) throw ShapeError("index out of range");
    return data_[static_cast<std::size_t>(idx.row) * cols() + static_cast<std::size_t>(idx.col)];
  }

  bool contains(Index idx) const noexcept {
    return idx.row >= 0 && idx.row < static_cast<Coord>(rows()) && idx.col >= 0 &&
           idx.col < static_cast<Coord>(cols());
  }

  bool same_shape(const Grid& other) const noexcept { return dims_ == other.dims_; }

  /// Index of the flat position `flat`.
  Index index_of(std::size_t flat) const noexcept {
    return {static_cast<Coord>(flat / cols()), static_cast<Coord>(flat % cols())};
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dims_ == b.dims_ && a.data_ == b.data_;
  }

 private:
  static std::size_t product(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
  }

  static void validate_dims(const std::vector<std::size_t>& dims) {
    if (dims.size() != 1 && dims.size() != 2) {
      throw ShapeError("grid rank must be 1 or 2, got " + std::to_string(dims.size()));
    }
    for (std::size_t d : dims) {
      if (d == 0) throw ShapeError("grid dimensions must be positive");
    }
  }

  std::vector<std::size_t> dims_;
  std::vector<T> data_;
};

template <typename T>
Grid<T> grid_new(std::vector<std::size_t> dims, const T& fill) {
  return Grid<T>(std::move(dims), fill);
}

/// Value at `idx`, or nullopt (the absent marker) when any coordinate is out
/// of range. The arity of `idx` must match the grid rank.
template <typename T>
std::optional<T> grid_get_padded(const Grid<T>& g, std::span<const Coord> idx) {
  if (static_cast<int>(idx.size()) != g.rank()) {
    throw ShapeError("index arity " + std::to_string(idx.size()) + " does not match grid rank " +
                     std::to_string(g.rank()));
  }
  const Index at{idx[0], idx.size() == 2 ? idx[1] : 0};
  if (!g.contains(at)) return std::nullopt;
  return g.at(at);
}

template <typename T>
std::optional<T> grid_get_padded(const Grid<T>& g, std::initializer_list<Coord> idx) {
  return grid_get_padded(g, std::span<const Coord>(idx.begin(), idx.size()));
}

}  // namespace slr
