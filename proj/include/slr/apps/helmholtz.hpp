#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "slr/errors.hpp"
#include "slr/functionals.hpp"
#include "slr/grid.hpp"
#include "slr/loop.hpp"

namespace slr::apps {

/// Weighted Jacobi solve of (alpha - Laplacian) u = f on an n x m grid with
/// zero Dirichlet boundary.
template <typename Scalar>
struct HelmholtzConfig {
  std::size_t n = 64;
  std::size_t m = 64;
  Scalar dx = 1;
  Scalar dy = 1;
  Scalar alpha = 1;
  Scalar relax = 1;
  double tol = 1e-6;
  Grid<Scalar> rhs;

  void validate() const {
    if (!(alpha > 0)) throw ConfigError("helmholtz alpha must be positive");
    if (!(tol > 0)) throw ConfigError("helmholtz tolerance must be positive");
    if (!(relax > 0) || relax > 1) throw ConfigError("helmholtz relaxation must be in (0, 1]");
    if (!(dx > 0) || !(dy > 0)) throw ConfigError("helmholtz grid spacing must be positive");
    if (rhs.dims() != std::vector<std::size_t>{n, m}) {
      throw ShapeError("helmholtz rhs dims must be n x m");
    }
  }
};

template <typename Scalar>
HelmholtzConfig<Scalar> helmholtz_constant_rhs(std::size_t n, std::size_t m, Scalar value,
                                               double tol = 1e-6) {
  HelmholtzConfig<Scalar> cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.tol = tol;
  cfg.rhs = Grid<Scalar>({n, m}, value);
  return cfg;
}

/// One relaxed Jacobi update of the center; absent neighbors read as 0.
template <typename Scalar>
struct HelmholtzKernel {
  Scalar relax;
  Scalar ax;
  Scalar ay;
  Scalar b;

  explicit HelmholtzKernel(const HelmholtzConfig<Scalar>& cfg)
      : relax(cfg.relax),
        ax(Scalar(1) / (cfg.dx * cfg.dx)),
        ay(Scalar(1) / (cfg.dy * cfg.dy)),
        b(2 * ax + 2 * ay + cfg.alpha) {}

  Scalar operator()(const Neighborhood<Scalar>& nb, const Env<Scalar>& rhs) const {
    const Scalar u = nb.center();
    const Scalar west = nb.rel(0, -1).value_or(0);
    const Scalar east = nb.rel(0, 1).value_or(0);
    const Scalar north = nb.rel(-1, 0).value_or(0);
    const Scalar south = nb.rel(1, 0).value_or(0);
    const Scalar jacobi = (rhs(nb.center_index()) + ax * (west + east) + ay * (north + south)) / b;
    return (1 - relax) * u + relax * jacobi;
  }
};

/// Squared change between successive iterates, accumulated in double.
template <typename Scalar>
struct SquaredChange {
  double operator()(Scalar next, Scalar prev) const {
    const double d = static_cast<double>(next) - static_cast<double>(prev);
    return d * d;
  }
};

/// Runs until the RMS change between iterates drops below `cfg.tol`.
template <typename Scalar, typename Exec = SequentialExecutor<Scalar>>
LoopResult<Scalar, double> helmholtz_solve(const HelmholtzConfig<Scalar>& cfg,
                                           const Grid<Scalar>& u0, Exec&& exec = Exec{},
                                           std::size_t max_iterations = kDefaultMaxIterations) {
  cfg.validate();
  if (!u0.same_shape(cfg.rhs)) throw ShapeError("helmholtz u0 dims must equal rhs dims");
  const double cells = static_cast<double>(cfg.n * cfg.m);
  const double tol = cfg.tol;
  auto converged = until([cells, tol](double sq) { return std::sqrt(sq / cells) < tol; },
                         max_iterations);
  return loop_stencil_reduce_d(1, HelmholtzKernel<Scalar>(cfg), SquaredChange<Scalar>{},
                               sum<double>(), converged, u0, Env<Scalar>(cfg.rhs),
                               std::forward<Exec>(exec));
}

}  // namespace slr::apps
