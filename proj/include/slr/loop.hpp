#pragma once

#include <cstddef>
#include <optional>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "slr/errors.hpp"
#include "slr/functionals.hpp"
#include "slr/grid.hpp"
#include "slr/ledger.hpp"
#include "slr/neighborhood.hpp"

namespace slr {

inline constexpr std::size_t kDefaultMaxIterations = 10000;

/// Termination test. `stop` returns true when the loop should end, which
/// is the "until" reading of the condition. It may take (reduce),
/// (reduce, iteration) or (reduce, iteration, state).
template <typename Pred>
struct Condition {
  Pred stop;
  std::size_t max_iterations = kDefaultMaxIterations;
};

template <typename Pred>
Condition<Pred> until(Pred stop, std::size_t max_iterations = kDefaultMaxIterations) {
  return {std::move(stop), max_iterations};
}

/// Stops after exactly `n` iterations.
inline auto after_iterations(std::size_t n) {
  return until([n](const auto&, std::size_t iteration) { return iteration >= n; },
               n > kDefaultMaxIterations ? n : kDefaultMaxIterations);
}

struct NoState {};

/// User state threaded through the loop: `init()` runs once before the
/// first iteration and `update(state, iteration, reduce)` once after each
/// stencil step, before the condition.
template <typename Init, typename Update>
struct LoopState {
  Init init;
  Update update;
};

template <typename Init, typename Update>
LoopState<Init, Update> make_state(Init init, Update update) {
  return {std::move(init), std::move(update)};
}

template <typename R>
struct LoopReport {
  std::size_t iterations = 0;
  R final_reduce{};
  bool hit_max_iterations = false;
  CopyLedger copies;
  /// Full-size (or partition-size) buffers allocated by this run; zero when
  /// an executor reuses buffers from a previous run of the same shape.
  std::size_t buffer_allocations = 0;
  /// Reduce value handed to the condition, one per iteration.
  std::vector<R> trace;
};

template <typename T, typename R>
struct LoopResult {
  Grid<T> grid;
  LoopReport<R> report;
};

template <typename T, typename R, typename S>
struct StatefulLoopResult {
  Grid<T> grid;
  LoopReport<R> report;
  S state;
};

/// One stencil-and-reduce sweep: `kernel` yields the next value of an
/// element from its neighborhood, `contribution(next, previous)` maps it
/// into the reduce domain, and `combine` folds contributions.
template <typename T, typename R, typename Op, typename Kernel, typename Contribution>
struct StepBody {
  using value_type = T;
  using reduce_type = R;

  int radius;
  Kernel kernel;
  Contribution contribution;
  Combinator<R, Op> combine;
};

template <typename T, typename R, typename Op, typename Kernel, typename Contribution>
auto make_step_body(int radius, Kernel kernel, Contribution contribution,
                    Combinator<R, Op> combine) {
  return StepBody<T, R, Op, Kernel, Contribution>{radius, std::move(kernel),
                                                  std::move(contribution), std::move(combine)};
}

/// Computes rows [row_begin, row_end) of the next grid from `src` into
/// `dst` (which starts at row_begin) and returns the left fold of their
/// contributions, seeded with the identity.
template <typename Body, typename T = typename Body::value_type>
typename Body::reduce_type sweep_rows(const Body& body, const PlaneView<T>& src, T* dst,
                                      Coord row_begin, Coord row_end) {
  using R = typename Body::reduce_type;
  R acc = body.combine.identity;
  const auto cols = static_cast<Coord>(src.cols);
  Index at{};
  try {
    for (Coord r = row_begin; r < row_end; ++r) {
      T* out = dst + (r - row_begin) * cols;
      for (Coord c = 0; c < cols; ++c) {
        at = {r, c};
        const Neighborhood<T> nb(src, at, body.radius);
        T next = body.kernel(nb);
        acc = body.combine(acc, body.contribution(next, nb.center()));
        out[c] = std::move(next);
      }
    }
  } catch (const KernelError&) {
    throw;
  } catch (const std::exception& e) {
    throw KernelError(at, e.what());
  }
  return acc;
}

/// Single-worker executor holding two full-size buffers that swap roles
/// each iteration.
template <typename T>
class SequentialExecutor {
 public:
  using value_type = T;

  void load(const Grid<T>& a, int /*radius*/) {
    ledger_.reset();
    allocations_ = 0;
    if (front_.size() != a.size()) {
      front_ = std::vector<T>(a.size());
      back_ = std::vector<T>(a.size());
      allocations_ = 2;
    }
    dims_ = a.dims();
    rows_ = a.rows();
    cols_ = a.cols();
    rank_ = a.rank();
    std::copy(a.data().begin(), a.data().end(), front_.begin());
    ledger_.fill_events += 1;
    ledger_.full_fill_elems += a.size();
  }

  template <typename Body>
  typename Body::reduce_type sweep(const Body& body) {
    const PlaneView<T> view{front_.data(), 0, rows_, cols_, rows_, rank_};
    return sweep_rows(body, view, back_.data(), 0, static_cast<Coord>(rows_));
  }

  void advance(bool /*continuing*/) { std::swap(front_, back_); }

  Grid<T> read_back() {
    ledger_.readback_events += 1;
    ledger_.readback_elems += front_.size();
    return Grid<T>(dims_, front_);
  }

  const CopyLedger& ledger() const noexcept { return ledger_; }
  std::size_t buffer_allocations() const noexcept { return allocations_; }
  std::size_t workers() const noexcept { return 1; }

 private:
  std::vector<T> front_;
  std::vector<T> back_;
  std::vector<std::size_t> dims_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 1;
  int rank_ = 1;
  CopyLedger ledger_;
  std::size_t allocations_ = 0;
};

/// Selects the -i (indexed) and -d (delta) behaviours for the generic loop.
template <bool Indexed, typename Delta = std::monostate>
struct LoopVariant {
  static constexpr bool indexed = Indexed;
  static constexpr bool has_delta = !std::is_same_v<Delta, std::monostate>;
  Delta delta{};
};

inline LoopVariant<false> plain_variant() { return {}; }
inline LoopVariant<true> indexed_variant() { return {}; }
template <typename D>
LoopVariant<false, D> delta_variant(D delta) {
  return {std::move(delta)};
}
template <typename D>
LoopVariant<true, D> indexed_delta_variant(D delta) {
  return {std::move(delta)};
}

namespace detail {

template <typename Pred, typename R, typename S>
bool call_stop(const Pred& stop, const R& reduce, std::size_t iteration, const S& state) {
  if constexpr (std::is_invocable_v<const Pred&, const R&, std::size_t, const S&>) {
    return stop(reduce, iteration, state);
  } else if constexpr (std::is_invocable_v<const Pred&, const R&, std::size_t>) {
    return stop(reduce, iteration);
  } else {
    return stop(reduce);
  }
}

template <typename StateSpec>
auto init_state(const StateSpec& spec) {
  if constexpr (std::is_same_v<StateSpec, NoState>) {
    return NoState{};
  } else {
    return spec.init();
  }
}

template <typename StateSpec, typename S, typename R>
S update_state(const StateSpec& spec, S state, std::size_t iteration, const R& reduce) {
  if constexpr (std::is_same_v<StateSpec, NoState>) {
    return state;
  } else {
    return spec.update(std::move(state), iteration, reduce);
  }
}

}  // namespace detail

/// Generic loop-of-stencil-reduce. All named variants forward here.
///
/// Per iteration: sweep (stencil into the back buffer plus reduce),
/// state update, condition; then the executor swaps buffers and, when
/// another iteration follows, aligns halos.
template <typename Variant, typename T, typename F, typename R, typename Op, typename Pred,
          typename StateSpec, typename E, typename Exec>
auto run_loop(const Variant& variant, int k, const F& f, const Combinator<R, Op>& op,
              const Condition<Pred>& cond, const StateSpec& state_spec, const Grid<T>& a,
              const Env<E>& env, Exec& exec) {
  if (k < 0) throw ConfigError("stencil radius must be non-negative");
  if (cond.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  env.check_aligned(a);

  auto kernel = [&f, &env](const Neighborhood<T>& nb) -> T {
    if constexpr (Variant::indexed) {
      return static_cast<T>(detail::call_elemental(f, IndexedNeighborhood<T>(nb), env));
    } else {
      return static_cast<T>(detail::call_elemental(f, nb, env));
    }
  };
  auto contribution = [&variant](const T& next, const T& prev) -> R {
    if constexpr (Variant::has_delta) {
      return static_cast<R>(variant.delta(next, prev));
    } else {
      (void)prev;
      return static_cast<R>(next);
    }
  };
  const auto body = make_step_body<T>(k, kernel, contribution, op);

  exec.load(a, k);
  auto state = detail::init_state(state_spec);
  LoopReport<R> report;
  report.buffer_allocations = exec.buffer_allocations();

  for (std::size_t iteration = 1;; ++iteration) {
    const R reduced = exec.sweep(body);
    state = detail::update_state(state_spec, std::move(state), iteration, reduced);
    report.trace.push_back(reduced);
    report.iterations = iteration;
    report.final_reduce = reduced;

    const bool stop = detail::call_stop(cond.stop, reduced, iteration, state);
    const bool capped = !stop && iteration >= cond.max_iterations;
    report.hit_max_iterations = capped;
    const bool continuing = !stop && !capped;
    exec.advance(continuing);
    if (!continuing) break;
  }

  Grid<T> out = exec.read_back();
  report.copies = exec.ledger();
  return StatefulLoopResult<T, R, decltype(state)>{std::move(out), std::move(report),
                                                  std::move(state)};
}

template <typename T, typename F, typename R, typename Op, typename Pred,
          typename E = std::monostate, typename Exec = SequentialExecutor<T>>
LoopResult<T, R> loop_stencil_reduce(int k, const F& f, const Combinator<R, Op>& op,
                                     const Condition<Pred>& cond, const Grid<T>& a,
                                     const Env<E>& env = Env<E>{}, Exec&& exec = Exec{}) {
  auto res = run_loop(plain_variant(), k, f, op, cond, NoState{}, a, env, exec);
  return {std::move(res.grid), std::move(res.report)};
}

/// Elemental function receives an IndexedNeighborhood.
template <typename T, typename F, typename R, typename Op, typename Pred,
          typename E = std::monostate, typename Exec = SequentialExecutor<T>>
LoopResult<T, R> loop_stencil_reduce_i(int k, const F& f, const Combinator<R, Op>& op,
                                       const Condition<Pred>& cond, const Grid<T>& a,
                                       const Env<E>& env = Env<E>{}, Exec&& exec = Exec{}) {
  auto res = run_loop(indexed_variant(), k, f, op, cond, NoState{}, a, env, exec);
  return {std::move(res.grid), std::move(res.report)};
}

/// Reduces delta(next, previous) instead of the new values. The pair grid
/// of the formal definition is never built: the previous value is read
/// from the retained front buffer.
template <typename T, typename F, typename D, typename R, typename Op, typename Pred,
          typename E = std::monostate, typename Exec = SequentialExecutor<T>>
LoopResult<T, R> loop_stencil_reduce_d(int k, const F& f, D delta, const Combinator<R, Op>& op,
                                       const Condition<Pred>& cond, const Grid<T>& a,
                                       const Env<E>& env = Env<E>{}, Exec&& exec = Exec{}) {
  auto res = run_loop(delta_variant(std::move(delta)), k, f, op, cond, NoState{}, a, env, exec);
  return {std::move(res.grid), std::move(res.report)};
}

/// Indexed elemental function combined with delta reduction.
template <typename T, typename F, typename D, typename R, typename Op, typename Pred,
          typename E = std::monostate, typename Exec = SequentialExecutor<T>>
LoopResult<T, R> loop_stencil_reduce_di(int k, const F& f, D delta, const Combinator<R, Op>& op,
                                        const Condition<Pred>& cond, const Grid<T>& a,
                                        const Env<E>& env = Env<E>{}, Exec&& exec = Exec{}) {
  auto res = run_loop(indexed_delta_variant(std::move(delta)), k, f, op, cond, NoState{}, a,
                      env, exec);
  return {std::move(res.grid), std::move(res.report)};
}

template <typename T, typename F, typename R, typename Op, typename Pred, typename Init,
          typename Update, typename E = std::monostate, typename Exec = SequentialExecutor<T>>
auto loop_stencil_reduce_s(int k, const F& f, const Combinator<R, Op>& op,
                           const Condition<Pred>& cond, const LoopState<Init, Update>& state,
                           const Grid<T>& a, const Env<E>& env = Env<E>{}, Exec&& exec = Exec{}) {
  return run_loop(plain_variant(), k, f, op, cond, state, a, env, exec);
}

/// Stateful loop combined with the indexed and/or delta behaviours.
template <bool Indexed, typename D, typename T, typename F, typename R, typename Op,
          typename Pred, typename Init, typename Update, typename E = std::monostate,
          typename Exec = SequentialExecutor<T>>
auto loop_stencil_reduce_s(const LoopVariant<Indexed, D>& variant, int k, const F& f,
                           const Combinator<R, Op>& op, const Condition<Pred>& cond,
                           const LoopState<Init, Update>& state, const Grid<T>& a,
                           const Env<E>& env = Env<E>{}, Exec&& exec = Exec{}) {
  return run_loop(variant, k, f, op, cond, state, a, env, exec);
}

}  // namespace slr
