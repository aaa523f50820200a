#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slr/partition.hpp"

namespace slr::bench {

/// Everything one CLI invocation needs, validated before any worker starts.
struct RunSpec {
  std::string app;
  std::size_t partitions = 1;
  std::size_t width = 1;
  std::optional<std::string> mode_flag;
  DeploymentMode mode = DeploymentMode::OneToOne;
  std::string csv;
  std::uint64_t seed = 42;
  std::size_t max_iters = 10000;

  std::string in;
  std::string out;
  std::string frames;
  std::string noise_map_out;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t steps = 100;
  double tol = 0.0;
  double alpha = 1.0;
  double noise_level = 0.0;

  /// Resolves the deployment mode and rejects inconsistent combinations.
  void validate();
};

/// Runs the benchmark front end; returns 0 on success, 2 for usage errors,
/// 1 for runtime failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace slr::bench
