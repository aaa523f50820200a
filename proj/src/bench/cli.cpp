#include "slr/bench/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include "slr/apps/denoise.hpp"
#include "slr/apps/gol.hpp"
#include "slr/apps/helmholtz.hpp"
#include "slr/apps/sobel.hpp"
#include "slr/io/csv.hpp"
#include "slr/io/pgm.hpp"
#include "slr/partition.hpp"
#include "slr/streaming.hpp"

namespace fs = std::filesystem;

namespace slr::bench {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

io::BenchRow base_row(const RunSpec& spec, const std::string& input) {
  io::BenchRow row;
  row.app = spec.app;
  row.input = input;
  row.partitions = spec.partitions;
  row.width = spec.width;
  row.mode = to_string(spec.mode);
  row.seed = spec.seed;
  return row;
}

template <typename R>
void fill_loop_fields(io::BenchRow& row, const LoopReport<R>& report) {
  row.iterations = report.iterations;
  row.fill_events = report.copies.fill_events;
  row.halo_elems = report.copies.halo_elems;
  row.readback_events = report.copies.readback_events;
  row.reduce_final = static_cast<double>(report.final_reduce);
}

std::vector<fs::path> list_frames(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("frames directory not found: " + dir);
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      frames.push_back(entry.path());
    }
  }
  std::sort(frames.begin(), frames.end());
  return frames;
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

template <typename T>
std::unique_ptr<PartitionedExecutor<T>> make_executor(const RunSpec& spec) {
  return std::make_unique<PartitionedExecutor<T>>(spec.mode, spec.partitions);
}

// ---- gol -------------------------------------------------------------------

std::vector<io::BenchRow> run_gol(const RunSpec& spec, std::ostream& out) {
  Grid<apps::Cell> seed;
  std::string input;
  if (!spec.in.empty()) {
    const auto img = io::read_pgm(spec.in);
    seed = apply_to_all([](std::uint8_t v) -> apps::Cell { return v ? 1 : 0; }, img);
    input = fs::path(spec.in).filename().string();
  } else {
    seed = apps::random_life(spec.n, spec.m, spec.seed);
    input = "random-" + std::to_string(spec.n) + "x" + std::to_string(spec.m);
  }
  auto exec = make_executor<apps::Cell>(spec);
  const std::size_t steps = std::min(spec.steps, spec.max_iters);
  const auto t0 = Clock::now();
  auto res = apps::game_of_life(seed, after_iterations(steps), *exec);
  const double ms = elapsed_ms(t0);
  if (!spec.out.empty()) {
    io::write_pgm(apply_to_all([](apps::Cell c) -> std::uint8_t { return c ? 255 : 0; }, res.grid),
                  spec.out);
  }
  auto row = base_row(spec, input);
  fill_loop_fields(row, res.report);
  row.wall_ms = ms;
  out << "gol " << input << ": " << res.report.iterations << " steps, "
      << res.report.final_reduce << " alive\n";
  return {row};
}

// ---- helmholtz -------------------------------------------------------------

std::vector<io::BenchRow> run_helmholtz(const RunSpec& spec, std::ostream& out) {
  auto cfg = apps::helmholtz_constant_rhs<float>(spec.n, spec.m, 1.0F, spec.tol);
  cfg.alpha = static_cast<float>(spec.alpha);
  const Grid<float> u0({spec.n, spec.m}, 0.0F);
  auto exec = make_executor<float>(spec);
  const auto t0 = Clock::now();
  auto res = apps::helmholtz_solve(cfg, u0, *exec, spec.max_iters);
  const double ms = elapsed_ms(t0);
  if (!spec.out.empty()) {
    const float peak = std::max(*std::max_element(res.grid.data().begin(), res.grid.data().end()),
                                1e-12F);
    io::write_pgm(apply_to_all(
                      [peak](float v) {
                        return static_cast<std::uint8_t>(
                            std::clamp(std::lround(255.0 * v / peak), 0L, 255L));
                      },
                      res.grid),
                  spec.out);
  }
  const std::string input = std::to_string(spec.n) + "x" + std::to_string(spec.m);
  auto row = base_row(spec, input);
  fill_loop_fields(row, res.report);
  row.wall_ms = ms;
  out << "helmholtz " << input << ": " << res.report.iterations << " iterations"
      << (res.report.hit_max_iterations ? " (iteration cap reached)" : "") << "\n";
  return {row};
}

// ---- sobel -----------------------------------------------------------------

std::vector<io::BenchRow> run_sobel(const RunSpec& spec, std::ostream& out) {
  if (!spec.in.empty()) {
    const auto img = io::read_pgm(spec.in);
    auto exec = make_executor<apps::Pixel>(spec);
    const auto t0 = Clock::now();
    auto res = apps::sobel_filter(img, *exec);
    const double ms = elapsed_ms(t0);
    if (!spec.out.empty()) io::write_pgm(res.grid, spec.out);
    auto row = base_row(spec, fs::path(spec.in).filename().string());
    fill_loop_fields(row, res.report);
    row.wall_ms = ms;
    out << "sobel " << row.input << ": written\n";
    return {row};
  }

  // pipe(read, ofarm(sobel), write) over a directory of frames.
  const auto frames = list_frames(spec.frames);
  ensure_dir(spec.out);
  struct Item {
    fs::path path;
    Grid<apps::Pixel> pixels;
    LoopReport<std::uint64_t> report;
    double ms = 0.0;
  };
  auto read = make_stage<fs::path>("read", [](fs::path p) {
    Item item;
    item.pixels = io::read_pgm(p);
    item.path = std::move(p);
    return item;
  });
  auto sobel = make_stage_factory<Item>("sobel", [spec] {
    std::shared_ptr<PartitionedExecutor<apps::Pixel>> exec = make_executor<apps::Pixel>(spec);
    return [exec](Item item) {
      const auto t0 = Clock::now();
      auto res = apps::sobel_filter(item.pixels, *exec);
      item.ms = elapsed_ms(t0);
      item.pixels = std::move(res.grid);
      item.report = std::move(res.report);
      return item;
    };
  });
  const std::string out_dir = spec.out;
  auto write = make_stage<Item>("write", [out_dir](Item item) {
    if (!out_dir.empty()) io::write_pgm(item.pixels, fs::path(out_dir) / item.path.filename());
    return item;
  });
  auto top = pipeline(read, ordered_farm(sobel, spec.width), write);

  std::vector<io::BenchRow> rows;
  std::size_t next = 0;
  auto report = run_stream(
      [&]() -> std::optional<fs::path> {
        if (next == frames.size()) return std::nullopt;
        return frames[next++];
      },
      top,
      [&](std::uint64_t, Item&& item) {
        auto row = base_row(spec, item.path.filename().string());
        fill_loop_fields(row, item.report);
        row.wall_ms = item.ms;
        rows.push_back(std::move(row));
      });
  if (report.items_failed > 0) {
    throw Error("sobel stream: " + std::to_string(report.items_failed) +
                " frame(s) failed, first: " + report.failures.front().message);
  }
  out << "sobel stream: " << report.items_out << " frames\n";
  return rows;
}

// ---- denoise ---------------------------------------------------------------

std::vector<io::BenchRow> run_denoise(const RunSpec& spec, std::ostream& out) {
  std::vector<fs::path> frames;
  if (!spec.in.empty()) {
    frames.push_back(spec.in);
  } else {
    frames = list_frames(spec.frames);
  }
  const bool single = !spec.in.empty();
  if (!single) ensure_dir(spec.out);
  ensure_dir(spec.noise_map_out);

  apps::VideoPipelineConfig cfg;
  cfg.width = spec.width;
  cfg.partitions = spec.partitions;
  cfg.mode = spec.mode;
  if (spec.tol > 0) cfg.restore.tol = spec.tol;

  std::vector<std::string> ids;
  for (const auto& f : frames) ids.push_back(f.string());
  std::size_t next = 0;
  auto source = [&]() -> std::optional<std::string> {
    if (next == ids.size()) return std::nullopt;
    return ids[next++];
  };
  auto reader = [&spec, &ids](const std::string& id) {
    auto img = io::read_pgm(id);
    if (spec.noise_level > 0) {
      const auto pos = static_cast<std::uint64_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
      img = apps::add_salt_and_pepper(img, spec.noise_level, spec.seed + pos).image;
    }
    return img;
  };
  auto writer = [&spec, single](const apps::VideoFrame& f) {
    const auto name = fs::path(f.id).filename();
    if (single) {
      if (!spec.out.empty()) io::write_pgm(f.pixels, spec.out);
    } else if (!spec.out.empty()) {
      io::write_pgm(f.pixels, fs::path(spec.out) / name);
    }
    if (!spec.noise_map_out.empty()) {
      io::write_pgm(apply_to_all([](std::uint8_t v) -> std::uint8_t { return v ? 255 : 0; },
                                 f.noise),
                    fs::path(spec.noise_map_out) / name);
    }
  };

  std::vector<io::BenchRow> rows;
  auto report = apps::video_restore_pipeline(
      source, reader, writer, cfg, [&](std::uint64_t, apps::VideoFrame&& f) {
        auto row = base_row(spec, fs::path(f.id).filename().string());
        fill_loop_fields(row, f.restore);
        row.wall_ms = f.restore_ms;
        rows.push_back(std::move(row));
      });
  if (report.items_failed > 0) {
    throw Error("denoise stream: " + std::to_string(report.items_failed) +
                " frame(s) failed, first: " + report.failures.front().message);
  }
  out << "denoise: " << report.items_out << " frame(s) restored\n";
  return rows;
}

void add_common(CLI::App* sub, RunSpec& spec) {
  sub->add_option("-p,--partitions", spec.partitions, "workers per item")
      ->check(CLI::PositiveNumber);
  sub->add_option("-w,--width", spec.width, "farm width")->check(CLI::PositiveNumber);
  sub->add_option("--mode", spec.mode_flag, "deployment mode: 1:1 or 1:n");
  sub->add_option("--csv", spec.csv, "benchmark CSV output path");
  sub->add_option("--seed", spec.seed, "random seed");
  sub->add_option("--max-iters", spec.max_iters, "iteration cap")->check(CLI::PositiveNumber);
}

}  // namespace

void RunSpec::validate() {
  if (mode_flag) {
    if (*mode_flag == "1:1") {
      mode = DeploymentMode::OneToOne;
    } else if (*mode_flag == "1:n" || *mode_flag == "1:N") {
      mode = DeploymentMode::OneToN;
    } else {
      throw UsageError("--mode must be 1:1 or 1:n, got " + *mode_flag);
    }
  } else {
    mode = partitions > 1 ? DeploymentMode::OneToN : DeploymentMode::OneToOne;
  }
  if (mode == DeploymentMode::OneToN && partitions < 2) {
    throw UsageError("mode 1:n needs --partitions >= 2");
  }
  if (mode == DeploymentMode::OneToOne && partitions != 1) {
    throw UsageError("mode 1:1 runs one partition per item; drop --partitions or use 1:n");
  }
  if (width > 1 && (app == "gol" || app == "helmholtz")) {
    throw UsageError("--width applies to streaming apps (sobel with --frames, denoise)");
  }
  if (app == "gol" && n == 0) n = 64;
  if (app == "helmholtz" && n == 0) n = 512;
  if (app == "helmholtz" && tol == 0) tol = 1e-6;
  if (app == "gol" || app == "helmholtz") {
    if (m == 0) m = n;
    if (partitions > n) throw UsageError("--partitions exceeds the number of rows");
  }
  if (tol < 0) throw UsageError("--tol must be positive");
  if (app == "sobel" || app == "denoise") {
    if (in.empty() == frames.empty()) throw UsageError("give exactly one of --in or --frames");
    if (app == "sobel" && !in.empty() && width > 1) {
      throw UsageError("--width needs a frame stream (--frames)");
    }
  }
  if (noise_level < 0 || noise_level > 1) throw UsageError("--noise-level must be in [0, 1]");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"loop-of-stencil-reduce benchmark driver"};
  app.require_subcommand(1);
  RunSpec spec;

  auto* gol = app.add_subcommand("gol", "Game of Life");
  add_common(gol, spec);
  gol->add_option("--in", spec.in, "seed PGM (nonzero = alive)");
  gol->add_option("--out", spec.out, "final board as PGM");
  gol->add_option("--n", spec.n, "rows (default 64)");
  gol->add_option("--m", spec.m, "columns (default: n)");
  gol->add_option("--steps", spec.steps, "generations (default 100)");

  auto* helm = app.add_subcommand("helmholtz", "Helmholtz Jacobi solver");
  add_common(helm, spec);
  helm->add_option("--n", spec.n, "rows (default 512)");
  helm->add_option("--m", spec.m, "columns (default: n)");
  helm->add_option("--tol", spec.tol, "RMS change threshold (default 1e-6)");
  helm->add_option("--alpha", spec.alpha, "Helmholtz coefficient (default 1)");
  helm->add_option("--out", spec.out, "solution scaled to PGM");

  auto* sobel = app.add_subcommand("sobel", "Sobel edge detector");
  add_common(sobel, spec);
  sobel->add_option("--in", spec.in, "input PGM");
  sobel->add_option("--frames", spec.frames, "directory of PGM frames");
  sobel->add_option("--out", spec.out, "output PGM (or directory with --frames)");

  auto* denoise = app.add_subcommand("denoise", "two-phase impulse noise restoration");
  add_common(denoise, spec);
  denoise->add_option("--in", spec.in, "input PGM");
  denoise->add_option("--frames", spec.frames, "directory of PGM frames");
  denoise->add_option("--out", spec.out, "restored PGM (or directory with --frames)");
  denoise->add_option("--noise-map-out", spec.noise_map_out, "directory for noise maps");
  denoise->add_option("--noise-level", spec.noise_level, "inject salt-and-pepper noise first");
  denoise->add_option("--tol", spec.tol, "mean absolute change per noisy pixel (default 0.5)");

  std::vector<const char*> argv{"slr_bench"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    spec.app = app.get_subcommands().front()->get_name();
    spec.validate();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    std::vector<io::BenchRow> rows;
    if (spec.app == "gol") rows = run_gol(spec, out);
    if (spec.app == "helmholtz") rows = run_helmholtz(spec, out);
    if (spec.app == "sobel") rows = run_sobel(spec, out);
    if (spec.app == "denoise") rows = run_denoise(spec, out);
    if (!spec.csv.empty()) io::emit_csv(rows, spec.csv);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace slr::bench
