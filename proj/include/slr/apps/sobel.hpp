#pragma once

#include <cstdint>
#include <utility>

#include "slr/functionals.hpp"
#include "slr/grid.hpp"
#include "slr/loop.hpp"
#include "slr/neighborhood.hpp"

namespace slr::apps {

using Pixel = std::uint8_t;

/// Gradient magnitude from the 3x3 Sobel kernels, rounded and clamped to
/// [0, 255]. Borders replicate the nearest edge pixel.
Pixel sobel_kernel(const Neighborhood<Pixel>& nb);

/// Sequential single-pass filter.
Grid<Pixel> sobel_filter(const Grid<Pixel>& img);

/// Filter run as a one-iteration loop on `exec`; the reduce is the sum of
/// output magnitudes.
template <typename Exec>
LoopResult<Pixel, std::uint64_t> sobel_filter(const Grid<Pixel>& img, Exec&& exec) {
  if (img.rank() != 2) throw ShapeError("sobel filter needs a 2D image");
  return loop_stencil_reduce(1, sobel_kernel, sum<std::uint64_t>(), after_iterations(1), img,
                             NoEnv{}, std::forward<Exec>(exec));
}

}  // namespace slr::apps
