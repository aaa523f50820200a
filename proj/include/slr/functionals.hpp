#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <type_traits>
#include <utility>
#include <variant>

#include "slr/errors.hpp"
#include "slr/grid.hpp"
#include "slr/neighborhood.hpp"

namespace slr {

/// Read-only auxiliary grid visible to elemental functions, aligned
/// index-wise with the pattern input. Default-constructed means "no env".
template <typename E = std::monostate>
class Env {
 public:
  Env() = default;
  explicit Env(const Grid<E>& grid) : grid_(&grid) {}

  bool has_value() const noexcept { return grid_ != nullptr; }
  const Grid<E>& grid() const {
    if (!grid_) throw ConfigError("pattern has no env grid");
    return *grid_;
  }
  const E& operator()(Index idx) const {
    const auto& g = grid();
    return g[static_cast<std::size_t>(idx.row) * g.cols() + static_cast<std::size_t>(idx.col)];
  }

  template <typename T>
  void check_aligned(const Grid<T>& input) const {
    if (grid_ && grid_->dims() != input.dims()) {
      throw ShapeError("env grid dims differ from input grid dims");
    }
  }

 private:
  const Grid<E>* grid_ = nullptr;
};

using NoEnv = Env<>;

/// Associative binary operation paired with its identity element.
template <typename R, typename Op>
struct Combinator {
  using value_type = R;

  Op op;
  R identity;

  R operator()(const R& a, const R& b) const { return op(a, b); }
};

template <typename Op, typename R>
Combinator(Op, R) -> Combinator<R, Op>;

template <typename R>
auto sum() {
  return Combinator{std::plus<R>{}, R{0}};
}

template <typename R>
auto maximum() {
  const R lowest = std::numeric_limits<R>::has_infinity ? -std::numeric_limits<R>::infinity()
                                                        : std::numeric_limits<R>::lowest();
  return Combinator{[](const R& a, const R& b) { return a < b ? b : a; }, lowest};
}

template <typename R>
auto minimum() {
  const R highest = std::numeric_limits<R>::has_infinity ? std::numeric_limits<R>::infinity()
                                                         : std::numeric_limits<R>::max();
  return Combinator{[](const R& a, const R& b) { return b < a ? b : a; }, highest};
}

/// True when `identity op x == x` and `x op identity == x` for every sample.
template <typename R, typename Op>
bool identity_holds(const Combinator<R, Op>& op, std::span<const R> samples) {
  for (const R& x : samples) {
    if (!(op(op.identity, x) == x) || !(op(x, op.identity) == x)) return false;
  }
  return true;
}

namespace detail {

/// Calls an elemental function with or without the env argument.
template <typename F, typename Nb, typename E>
decltype(auto) call_elemental(const F& f, const Nb& nb, const Env<E>& env) {
  if constexpr (std::is_invocable_v<const F&, const Nb&, const Env<E>&>) {
    return f(nb, env);
  } else {
    static_assert(std::is_invocable_v<const F&, const Nb&>,
                  "elemental function must accept (neighborhood) or (neighborhood, env)");
    return f(nb);
  }
}

template <typename F, typename T, typename E>
using elemental_result_t =
    std::decay_t<decltype(call_elemental(std::declval<const F&>(),
                                         std::declval<const Neighborhood<T>&>(),
                                         std::declval<const Env<E>&>()))>;

template <typename F, typename T, typename E>
using indexed_result_t =
    std::decay_t<decltype(call_elemental(std::declval<const F&>(),
                                         std::declval<const IndexedNeighborhood<T>&>(),
                                         std::declval<const Env<E>&>()))>;

template <typename U, typename T, typename Body>
Grid<U> sweep_grid(const Grid<T>& a, int k, Body&& body) {
  if (k < 0) throw ConfigError("stencil radius must be non-negative");
  std::vector<U> out;
  out.reserve(a.size());
  const auto view = PlaneView<T>::of(a);
  Index at{};
  try {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        at = {static_cast<Coord>(r), static_cast<Coord>(c)};
        const Neighborhood<T> nb(view, at, k);
        out.push_back(body(nb));
      }
    }
  } catch (const KernelError&) {
    throw;
  } catch (const std::exception& e) {
    throw KernelError(at, e.what());
  }
  return Grid<U>(a.dims(), std::move(out));
}

}  // namespace detail

template <typename F, typename T>
auto apply_to_all(F&& f, const Grid<T>& a) {
  using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
  std::vector<U> out;
  out.reserve(a.size());
  for (const T& x : a.data()) out.push_back(f(x));
  return Grid<U>(a.dims(), std::move(out));
}

/// Left fold over row-major order, seeded with the identity.
template <typename R, typename Op, typename T>
R reduce_all(const Combinator<R, Op>& op, const Grid<T>& a) {
  R acc = op.identity;
  for (const T& x : a.data()) acc = op(acc, static_cast<R>(x));
  return acc;
}

/// Fresh grid whose element at i is f(window of radius k around i, env).
template <typename F, typename T, typename E = std::monostate>
auto stencil_apply(const F& f, int k, const Grid<T>& a, const Env<E>& env = Env<E>{}) {
  env.check_aligned(a);
  using U = detail::elemental_result_t<F, T, E>;
  return detail::sweep_grid<U>(a, k, [&](const Neighborhood<T>& nb) -> U {
    return detail::call_elemental(f, nb, env);
  });
}

/// As stencil_apply, but f sees value/global-index pairs.
template <typename F, typename T, typename E = std::monostate>
auto stencil_apply_indexed(const F& f, int k, const Grid<T>& a, const Env<E>& env = Env<E>{}) {
  env.check_aligned(a);
  using U = detail::indexed_result_t<F, T, E>;
  return detail::sweep_grid<U>(a, k, [&](const Neighborhood<T>& nb) -> U {
    return detail::call_elemental(f, IndexedNeighborhood<T>(nb), env);
  });
}

template <typename F, typename T>
auto map_pattern(F&& f, const Grid<T>& a) {
  return apply_to_all(std::forward<F>(f), a);
}

template <typename R, typename Op, typename T>
R reduce_pattern(const Combinator<R, Op>& op, const Grid<T>& a) {
  return reduce_all(op, a);
}

}  // namespace slr
