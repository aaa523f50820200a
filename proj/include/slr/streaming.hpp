#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "slr/bounded_queue.hpp"
#include "slr/errors.hpp"

namespace slr {

inline constexpr std::size_t kDefaultQueueCapacity = 8;

/// Sequence-tagged unit flowing through a stream. An item either carries a
/// payload, carries the error that poisoned it, or marks end-of-stream.
template <typename T>
struct StreamItem {
  std::uint64_t seq = 0;
  std::optional<T> payload;
  std::exception_ptr error;
  bool end = false;

  static StreamItem end_marker() {
    StreamItem item;
    item.end = true;
    return item;
  }
};

template <typename T>
using Channel = BoundedQueue<StreamItem<T>>;

struct StageStats {
  std::string name;
  std::atomic<std::uint64_t> items{0};
  std::atomic<std::uint64_t> busy_ns{0};
};

/// Owns the threads, channels and per-stage statistics of one stream run.
class StreamContext {
 public:
  explicit StreamContext(std::size_t queue_capacity) : capacity_(queue_capacity) {}

  StreamContext(const StreamContext&) = delete;
  StreamContext& operator=(const StreamContext&) = delete;

  ~StreamContext() { join(); }

  template <typename T>
  Channel<T>& make_channel() {
    auto ch = std::make_shared<Channel<T>>(capacity_);
    Channel<T>& ref = *ch;
    high_water_.push_back([ch] { return ch->high_water(); });
    channels_.push_back(std::move(ch));
    return ref;
  }

  StageStats& make_stats(const std::string& name) {
    auto stats = std::make_shared<StageStats>();
    stats->name = name;
    StageStats& ref = *stats;
    stats_.push_back(std::move(stats));
    return ref;
  }

  template <typename Fn>
  void spawn(Fn&& fn) {
    threads_.emplace_back(std::forward<Fn>(fn));
  }

  void join() {
    for (auto& t : threads_) {
      if (t.joinable()) t.join();
    }
  }

  std::size_t capacity() const noexcept { return capacity_; }

  std::size_t max_occupancy() const {
    std::size_t peak = 0;
    for (const auto& hw : high_water_) peak = std::max(peak, hw());
    return peak;
  }

  const std::vector<std::shared_ptr<StageStats>>& stats() const noexcept { return stats_; }

 private:
  std::size_t capacity_;
  std::vector<std::shared_ptr<void>> channels_;
  std::vector<std::function<std::size_t()>> high_water_;
  std::vector<std::shared_ptr<StageStats>> stats_;
  std::vector<std::thread> threads_;
};

/// A stream transformation In -> Out. `launch` wires the stage between two
/// channels, spawning its worker threads into the context. A stage reading
/// end-of-stream forwards exactly one end marker and exits.
template <typename In, typename Out>
class Stage {
 public:
  using input_type = In;
  using output_type = Out;
  using Launcher = std::function<void(Channel<In>&, Channel<Out>&, StreamContext&)>;

  Stage(std::string name, Launcher launch) : name_(std::move(name)), launch_(std::move(launch)) {}

  const std::string& name() const noexcept { return name_; }
  void launch(Channel<In>& in, Channel<Out>& out, StreamContext& ctx) const {
    launch_(in, out, ctx);
  }

 private:
  std::string name_;
  Launcher launch_;
};

namespace detail {

template <typename In, typename Out, typename Fn>
void run_node(Fn& fn, Channel<In>& in, Channel<Out>& out, StageStats& stats) {
  for (;;) {
    StreamItem<In> item = in.pop();
    if (item.end) {
      out.push(StreamItem<Out>::end_marker());
      return;
    }
    StreamItem<Out> result;
    result.seq = item.seq;
    if (item.error) {
      result.error = item.error;
      out.push(std::move(result));
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      result.payload.emplace(fn(std::move(*item.payload)));
    } catch (...) {
      result.error = std::current_exception();
    }
    const auto dt = std::chrono::steady_clock::now() - t0;
    stats.busy_ns += static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(dt).count());
    stats.items += 1;
    out.push(std::move(result));
  }
}

}  // namespace detail

/// Stage whose replicas each build their own callable from `factory`, so
/// per-replica resources (executors, scratch buffers) are not shared.
template <typename In, typename Factory>
auto make_stage_factory(std::string name, Factory factory) {
  using Fn = std::decay_t<std::invoke_result_t<Factory&>>;
  using Out = std::decay_t<std::invoke_result_t<Fn&, In&&>>;
  auto launch = [name, factory](Channel<In>& in, Channel<Out>& out, StreamContext& ctx) {
    StageStats& stats = ctx.make_stats(name);
    ctx.spawn([&in, &out, &stats, fn = factory()]() mutable {
      detail::run_node<In, Out>(fn, in, out, stats);
    });
  };
  return Stage<In, Out>(name, std::move(launch));
}

template <typename In, typename Fn>
auto make_stage(std::string name, Fn fn) {
  return make_stage_factory<In>(std::move(name), [fn] { return fn; });
}

template <typename A, typename B>
Stage<A, B> pipeline(Stage<A, B> only) {
  return only;
}

/// Functional semantics: pipeline(a, b)(x) == b(a(x)); stages run
/// concurrently on different items.
template <typename A, typename B, typename C, typename... Rest>
auto pipeline(Stage<A, B> first, Stage<B, C> second, Rest... rest) {
  auto launch = [first, second](Channel<A>& in, Channel<C>& out, StreamContext& ctx) {
    Channel<B>& mid = ctx.make_channel<B>();
    first.launch(in, mid, ctx);
    second.launch(mid, out, ctx);
  };
  Stage<A, C> joined(first.name() + "|" + second.name(), std::move(launch));
  if constexpr (sizeof...(Rest) == 0) {
    return joined;
  } else {
    return pipeline(std::move(joined), std::move(rest)...);
  }
}

/// Replicates `inner` `width` times. Replicas pull items on demand from a
/// shared queue; at most `width` items are in flight and the collector
/// re-emits results in input order.
template <typename In, typename Out>
Stage<In, Out> ordered_farm(Stage<In, Out> inner, std::size_t width) {
  if (width == 0) throw ConfigError("farm width must be at least 1");
  if (width == 1) return inner;
  auto launch = [inner, width](Channel<In>& in, Channel<Out>& out, StreamContext& ctx) {
    Channel<In>& work = ctx.make_channel<In>();
    Channel<Out>& done = ctx.make_channel<Out>();
    struct Shared {
      explicit Shared(std::size_t w) : slots(w) {}
      Slots slots;
      std::mutex mutex;
      std::deque<std::uint64_t> order;
    };
    auto shared = std::make_shared<Shared>(width);

    ctx.spawn([&in, &work, shared, width] {
      for (;;) {
        StreamItem<In> item = in.pop();
        if (item.end) {
          for (std::size_t r = 0; r < width; ++r) work.push(StreamItem<In>::end_marker());
          return;
        }
        shared->slots.acquire();
        {
          std::lock_guard lock(shared->mutex);
          shared->order.push_back(item.seq);
        }
        work.push(std::move(item));
      }
    });

    for (std::size_t r = 0; r < width; ++r) inner.launch(work, done, ctx);

    ctx.spawn([&done, &out, shared, width] {
      std::map<std::uint64_t, StreamItem<Out>> pending;
      std::size_t ends = 0;
      while (ends < width) {
        StreamItem<Out> item = done.pop();
        if (item.end) {
          ++ends;
          continue;
        }
        pending.emplace(item.seq, std::move(item));
        for (;;) {
          std::uint64_t next = 0;
          {
            std::lock_guard lock(shared->mutex);
            if (shared->order.empty()) break;
            next = shared->order.front();
            auto it = pending.find(next);
            if (it == pending.end()) break;
            shared->order.pop_front();
            out.push(std::move(it->second));
            pending.erase(it);
          }
          shared->slots.release();
        }
      }
      out.push(StreamItem<Out>::end_marker());
    });
  };
  return Stage<In, Out>("ofarm(" + inner.name() + ")", std::move(launch));
}

struct StageReport {
  std::string name;
  std::uint64_t items = 0;
  double busy_ms = 0.0;
  double mean_service_ms = 0.0;
};

struct StreamFailure {
  std::uint64_t seq = 0;
  std::string message;
};

struct StreamReport {
  std::uint64_t items_in = 0;
  std::uint64_t items_out = 0;
  std::uint64_t items_failed = 0;
  double wall_ms = 0.0;
  std::vector<StageReport> stages;
  std::vector<StreamFailure> failures;
  std::size_t queue_capacity = 0;
  std::size_t max_queue_occupancy = 0;
};

namespace detail {

inline std::string describe(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

inline std::vector<StageReport> merge_stats(const StreamContext& ctx) {
  std::vector<StageReport> out;
  for (const auto& s : ctx.stats()) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const StageReport& r) { return r.name == s->name; });
    if (it == out.end()) {
      out.push_back({s->name, 0, 0.0, 0.0});
      it = std::prev(out.end());
    }
    it->items += s->items.load();
    it->busy_ms += static_cast<double>(s->busy_ns.load()) / 1e6;
  }
  for (auto& r : out) r.mean_service_ms = r.items == 0 ? 0.0 : r.busy_ms / r.items;
  return out;
}

}  // namespace detail

/// Drives `source` items through `top` into `sink(seq, payload)`.
///
/// `source` returns std::nullopt at end of stream. Items poisoned by a
/// stage are counted as failed and never reach the sink. A throwing source
/// or sink stops the run; the stream is drained and an IoError with the
/// failure context is thrown.
template <typename In, typename Out, typename Source, typename Sink>
StreamReport run_stream(Source&& source, const Stage<In, Out>& top, Sink&& sink,
                        std::size_t queue_capacity = kDefaultQueueCapacity) {
  StreamReport report;
  report.queue_capacity = queue_capacity;
  const auto t0 = std::chrono::steady_clock::now();

  StreamContext ctx(queue_capacity);
  Channel<In>& in = ctx.make_channel<In>();
  Channel<Out>& out = ctx.make_channel<Out>();
  top.launch(in, out, ctx);

  std::exception_ptr source_error;
  std::uint64_t fed = 0;
  std::thread feeder([&] {
    try {
      for (;;) {
        std::optional<In> next = source();
        if (!next) break;
        StreamItem<In> item;
        item.seq = fed;
        item.payload.emplace(std::move(*next));
        in.push(std::move(item));
        ++fed;
      }
    } catch (...) {
      source_error = std::current_exception();
    }
    in.push(StreamItem<In>::end_marker());
  });

  std::exception_ptr sink_error;
  std::uint64_t sink_seq = 0;
  for (;;) {
    StreamItem<Out> item = out.pop();
    if (item.end) break;
    if (item.error) {
      ++report.items_failed;
      report.failures.push_back({item.seq, detail::describe(item.error)});
      continue;
    }
    ++report.items_out;
    if (sink_error) continue;
    try {
      sink(item.seq, std::move(*item.payload));
    } catch (...) {
      sink_error = std::current_exception();
      sink_seq = item.seq;
    }
  }
  feeder.join();
  ctx.join();

  report.items_in = fed;
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  report.stages = detail::merge_stats(ctx);
  report.max_queue_occupancy = ctx.max_occupancy();

  if (source_error) {
    throw IoError("stream source failed after " + std::to_string(fed) +
                  " items: " + detail::describe(source_error));
  }
  if (sink_error) {
    throw IoError("stream sink failed on item " + std::to_string(sink_seq) + ": " +
                  detail::describe(sink_error));
  }
  return report;
}

}  // namespace slr
