#pragma once

// Reference 2D stencil sweep over nested vectors; out-of-range reads are
// passed to the kernel as std::nullopt.

#include <functional>
#include <optional>
#include <vector>

namespace oracle {

using Plane = std::vector<std::vector<long>>;
using Window = std::vector<std::optional<long>>;  // row-major (2k+1)^2

inline Plane stencil_step(const Plane& a, int k, const std::function<long(const Window&)>& f) {
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(a[0].size());
  Plane out(rows, std::vector<long>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      Window w;
      for (int dr = -k; dr <= k; ++dr)
        for (int dc = -k; dc <= k; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr >= 0 && rr < rows && cc >= 0 && cc < cols) {
            w.push_back(a[rr][cc]);
          } else {
            w.push_back(std::nullopt);
          }
        }
      out[r][c] = f(w);
    }
  return out;
}

}  // namespace oracle
