#include "slr/apps/sobel.hpp"

#include <algorithm>
#include <cmath>

namespace slr::apps {

Pixel sobel_kernel(const Neighborhood<Pixel>& nb) {
  // Replicate border: an out-of-range row or column clamps to the edge.
  auto px = [&](int dr, int dc) -> int {
    if (auto v = nb.rel(dr, dc)) return *v;
    const int r = nb.rel(dr, 0) ? dr : 0;
    const int c = nb.rel(0, dc) ? dc : 0;
    return *nb.rel(r, c);
  };
  const int gx = -px(-1, -1) + px(-1, 1) - 2 * px(0, -1) + 2 * px(0, 1) - px(1, -1) + px(1, 1);
  const int gy = -px(-1, -1) - 2 * px(-1, 0) - px(-1, 1) + px(1, -1) + 2 * px(1, 0) + px(1, 1);
  const double magnitude = std::round(std::sqrt(static_cast<double>(gx * gx + gy * gy)));
  return static_cast<Pixel>(std::clamp(magnitude, 0.0, 255.0));
}

Grid<Pixel> sobel_filter(const Grid<Pixel>& img) {
  if (img.rank() != 2) throw ShapeError("sobel filter needs a 2D image");
  return stencil_apply(sobel_kernel, 1, img);
}

}  // namespace slr::apps
