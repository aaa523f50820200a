#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "slr/errors.hpp"
#include "slr/functionals.hpp"
#include "slr/grid.hpp"
#include "slr/loop.hpp"
#include "slr/neighborhood.hpp"
#include "slr/partition.hpp"
#include "slr/streaming.hpp"

namespace slr::apps {

using Pixel = std::uint8_t;
/// 1 marks a pixel detected as an impulse, 0 a clean pixel.
using NoiseMap = Grid<std::uint8_t>;

struct RestoreConfig {
  int amf_wmax = 7;
  double phi_eps = 1e-2;
  double beta = 2.0;
  /// Stop when the mean absolute change over noisy pixels falls below this.
  double tol = 0.5;

  void validate() const;
};

// ---- detection -------------------------------------------------------------

/// Adaptive median decision for the center pixel of `nb` (radius
/// wmax / 2): windows 3, 5, ..., wmax are tried in turn over their in-range
/// pixels. The first window with min < median < max decides: noisy iff the
/// pixel equals the window min or max. If every window is flat, the pixel
/// is noisy unless it equals the median of the widest window.
Pixel amf_decide(const IndexedNeighborhood<Pixel>& nb, int wmax);

NoiseMap amf_detect(const Grid<Pixel>& img, int wmax = 7);

/// Detection as a one-iteration indexed loop on `exec`; the reduce counts
/// noisy pixels.
template <typename Exec>
LoopResult<Pixel, std::uint64_t> amf_detect(const Grid<Pixel>& img, int wmax, Exec&& exec) {
  RestoreConfig{wmax}.validate();
  auto decide = [wmax](const IndexedNeighborhood<Pixel>& nb) { return amf_decide(nb, wmax); };
  return loop_stencil_reduce_i(wmax / 2, decide, sum<std::uint64_t>(), after_iterations(1), img,
                               NoEnv{}, std::forward<Exec>(exec));
}

// ---- restoration -----------------------------------------------------------

/// Value in [0, 255] minimizing the edge-preserving functional of a noisy
/// pixel given its 8 neighbors: clean neighbors weigh 2 and noisy ones 1,
/// each through phi(t) = sqrt(t^2 + eps). Ternary search to 0.25.
struct RestoreKernel {
  double phi_eps;
  double beta;

  float operator()(const IndexedNeighborhood<float>& nb, const Env<std::uint8_t>& noise) const;
};

/// |next - prev| rounded to a multiple of 2^-20; sums of these are exact.
struct AbsoluteChange {
  double operator()(float next, float prev) const {
    const double d = std::abs(static_cast<double>(next) - static_cast<double>(prev));
    return std::ldexp(std::round(std::ldexp(d, 20)), -20);
  }
};

struct RestoreResult {
  Grid<Pixel> image;
  LoopReport<double> report;
  std::size_t noisy_pixels = 0;
};

std::size_t count_noisy(const NoiseMap& noise);

Grid<Pixel> to_pixels(const Grid<float>& g);

/// Iterates the restoration kernel over noisy pixels (clean pixels pass
/// through) until the mean absolute change per noisy pixel drops below
/// `cfg.tol`.
template <typename Exec = SequentialExecutor<float>>
RestoreResult restore_regularize(const Grid<Pixel>& img, const NoiseMap& noise,
                                 const RestoreConfig& cfg, Exec&& exec = Exec{}) {
  cfg.validate();
  if (!img.same_shape(noise)) throw ShapeError("noise map dims must equal image dims");
  const std::size_t noisy = count_noisy(noise);
  const double tol = cfg.tol;
  auto settled = until([noisy, tol](double change) {
    return noisy == 0 || change / static_cast<double>(noisy) < tol;
  });
  Grid<float> start = apply_to_all([](Pixel p) { return static_cast<float>(p); }, img);
  auto res = loop_stencil_reduce_di(1, RestoreKernel{cfg.phi_eps, cfg.beta}, AbsoluteChange{},
                                    sum<double>(), settled, start, Env<std::uint8_t>(noise),
                                    std::forward<Exec>(exec));
  return {to_pixels(res.grid), std::move(res.report), noisy};
}

// ---- synthetic inputs ------------------------------------------------------

/// Smooth diagonal ramp from 20 to 235; never hits the impulse values.
Grid<Pixel> gradient_image(std::size_t rows, std::size_t cols);

struct NoisyImage {
  Grid<Pixel> image;
  /// 1 where an impulse was injected.
  NoiseMap truth;
};

/// Replaces each pixel independently with probability `level` by 0 or 255
/// (equal odds), using a fixed-seed generator.
NoisyImage add_salt_and_pepper(const Grid<Pixel>& clean, double level, std::uint64_t seed);

double mean_absolute_error(const Grid<Pixel>& a, const Grid<Pixel>& b);

// ---- streaming topology ----------------------------------------------------

struct VideoFrame {
  std::string id;
  Grid<Pixel> pixels;
  NoiseMap noise;
  std::size_t noisy_pixels = 0;
  LoopReport<double> restore;
  double restore_ms = 0.0;
};

struct VideoPipelineConfig {
  RestoreConfig restore;
  /// Replicas of the restore stage.
  std::size_t width = 1;
  std::size_t partitions = 1;
  DeploymentMode mode = DeploymentMode::OneToOne;
  std::size_t queue_capacity = kDefaultQueueCapacity;
};

using FrameSource = std::function<std::optional<std::string>()>;
using FrameReader = std::function<Grid<Pixel>(const std::string&)>;
using FrameWriter = std::function<void(const VideoFrame&)>;
using FrameSink = std::function<void(std::uint64_t, VideoFrame&&)>;

/// pipe(read, detect, ofarm(restore), write). Each restore replica owns a
/// long-lived executor in the requested deployment mode. `sink`, when set,
/// receives every written frame in input order.
StreamReport video_restore_pipeline(FrameSource source, FrameReader read, FrameWriter write,
                                    const VideoPipelineConfig& cfg, FrameSink sink = {});

}  // namespace slr::apps
