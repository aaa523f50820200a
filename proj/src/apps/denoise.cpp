#include "slr/apps/denoise.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

namespace slr::apps {

void RestoreConfig::validate() const {
  if (amf_wmax < 3 || amf_wmax % 2 == 0) {
    throw ConfigError("amf_wmax must be odd and at least 3, got " + std::to_string(amf_wmax));
  }
  if (!(phi_eps > 0)) throw ConfigError("phi_eps must be positive");
  if (!(beta > 0)) throw ConfigError("beta must be positive");
  if (!(tol > 0)) throw ConfigError("restore tolerance must be positive");
}

Pixel amf_decide(const IndexedNeighborhood<Pixel>& nb, int wmax) {
  thread_local std::vector<Pixel> window;
  const Pixel center = nb.center().value;
  Pixel median = center;
  for (int w = 3; w <= wmax; w += 2) {
    const int h = w / 2;
    window.clear();
    for (int dr = -h; dr <= h; ++dr) {
      for (int dc = -h; dc <= h; ++dc) {
        if (auto slot = nb.rel(dr, dc)) window.push_back(slot->value);
      }
    }
    std::sort(window.begin(), window.end());
    const Pixel lo = window.front();
    const Pixel hi = window.back();
    median = window[window.size() / 2];
    if (lo < median && median < hi) return (center == lo || center == hi) ? 1 : 0;
  }
  return center == median ? 0 : 1;
}

NoiseMap amf_detect(const Grid<Pixel>& img, int wmax) {
  RestoreConfig{wmax}.validate();
  if (img.rank() != 2) throw ShapeError("amf detection needs a 2D image");
  return stencil_apply_indexed(
      [wmax](const IndexedNeighborhood<Pixel>& nb) { return amf_decide(nb, wmax); }, wmax / 2,
      img);
}

float RestoreKernel::operator()(const IndexedNeighborhood<float>& nb,
                                const Env<std::uint8_t>& noise) const {
  const auto center = nb.center();
  if (noise(center.index) == 0) return center.value;

  std::array<double, 8> value{};
  std::array<double, 8> weight{};
  std::size_t n = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (auto slot = nb.rel(dr, dc)) {
        value[n] = slot->value;
        weight[n] = noise(slot->index) ? 1.0 : 2.0;
        ++n;
      }
    }
  }
  if (n == 0) return center.value;

  auto cost = [&](double u) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = u - value[i];
      total += weight[i] * std::sqrt(t * t + phi_eps);
    }
    return beta * total;
  };
  double lo = 0.0;
  double hi = 255.0;
  while (hi - lo > 0.25) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (cost(m1) < cost(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return static_cast<float>(0.5 * (lo + hi));
}

std::size_t count_noisy(const NoiseMap& noise) {
  return static_cast<std::size_t>(
      std::count_if(noise.data().begin(), noise.data().end(), [](std::uint8_t v) { return v; }));
}

Grid<Pixel> to_pixels(const Grid<float>& g) {
  return apply_to_all(
      [](float v) {
        return static_cast<Pixel>(std::clamp(std::lround(static_cast<double>(v)), 0L, 255L));
      },
      g);
}

Grid<Pixel> gradient_image(std::size_t rows, std::size_t cols) {
  Grid<Pixel> img({rows, cols}, Pixel{20});
  const double span = static_cast<double>(rows + cols - 2);
  if (span == 0.0) return img;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      img(r, c) = static_cast<Pixel>(20 + std::lround(215.0 * static_cast<double>(r + c) / span));
    }
  }
  return img;
}

NoisyImage add_salt_and_pepper(const Grid<Pixel>& clean, double level, std::uint64_t seed) {
  if (level < 0.0 || level > 1.0) throw ConfigError("noise level must be in [0, 1]");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  NoisyImage out{clean, NoiseMap(clean.dims(), std::uint8_t{0})};
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (uniform() < level) {
      out.image[i] = uniform() < 0.5 ? 0 : 255;
      out.truth[i] = 1;
    }
  }
  return out;
}

double mean_absolute_error(const Grid<Pixel>& a, const Grid<Pixel>& b) {
  if (!a.same_shape(b)) throw ShapeError("mean absolute error needs equally shaped grids");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(int{a[i]} - int{b[i]});
  return total / static_cast<double>(a.size());
}

StreamReport video_restore_pipeline(FrameSource source, FrameReader read, FrameWriter write,
                                    const VideoPipelineConfig& cfg, FrameSink sink) {
  cfg.restore.validate();
  if (cfg.width == 0) throw ConfigError("restore farm width must be at least 1");
  validate_deployment(cfg.mode, cfg.partitions);

  auto read_stage = make_stage<std::string>("read", [read](std::string id) {
    VideoFrame frame;
    frame.pixels = read(id);
    frame.id = std::move(id);
    return frame;
  });
  auto detect_stage = make_stage<VideoFrame>("detect", [wmax = cfg.restore.amf_wmax](VideoFrame f) {
    f.noise = amf_detect(f.pixels, wmax);
    return f;
  });
  auto restore_stage = make_stage_factory<VideoFrame>("restore", [cfg] {
    auto exec = std::make_shared<PartitionedExecutor<float>>(cfg.mode, cfg.partitions);
    return [exec, restore = cfg.restore](VideoFrame f) {
      const auto t0 = std::chrono::steady_clock::now();
      auto result = restore_regularize(f.pixels, f.noise, restore, *exec);
      f.restore_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
      f.pixels = std::move(result.image);
      f.restore = std::move(result.report);
      f.noisy_pixels = result.noisy_pixels;
      return f;
    };
  });
  auto write_stage = make_stage<VideoFrame>("write", [write](VideoFrame f) {
    write(f);
    return f;
  });

  auto top = pipeline(read_stage, detect_stage, ordered_farm(restore_stage, cfg.width),
                      write_stage);
  return run_stream(
      [&source] { return source(); }, top,
      [&sink](std::uint64_t seq, VideoFrame&& f) {
        if (sink) sink(seq, std::move(f));
      },
      cfg.queue_capacity);
}

}  // namespace slr::apps
