#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slr/errors.hpp"
#include "slr/functionals.hpp"
#include "slr/grid.hpp"
#include "slr/ledger.hpp"
#include "slr/loop.hpp"
#include "slr/neighborhood.hpp"
#include "slr/worker_group.hpp"

namespace slr {

/// 1:1 sends each stream item to a single worker; 1:n splits one item
/// across n workers.
enum class DeploymentMode { OneToOne, OneToN };

inline const char* to_string(DeploymentMode mode) {
  return mode == DeploymentMode::OneToOne ? "1:1" : "1:n";
}

/// Rejects partition counts that do not fit the deployment mode.
inline void validate_deployment(DeploymentMode mode, std::size_t partitions) {
  if (partitions == 0) throw ConfigError("partition count must be at least 1");
  if (mode == DeploymentMode::OneToN && partitions < 2) {
    throw ConfigError("1:n deployment needs at least 2 partitions");
  }
  if (mode == DeploymentMode::OneToOne && partitions != 1) {
    throw ConfigError("1:1 deployment uses exactly one partition per item");
  }
}

struct RowRange {
  Coord begin = 0;
  Coord end = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(end - begin); }
  friend bool operator==(const RowRange&, const RowRange&) = default;
};

/// Even split of `rows` into `parts` contiguous ranges; the first
/// `rows % parts` ranges get one extra row.
inline std::vector<RowRange> split_rows(std::size_t rows, std::size_t parts) {
  if (parts == 0) throw ConfigError("partition count must be at least 1");
  if (rows < parts) {
    throw ConfigError("cannot split " + std::to_string(rows) + " rows across " +
                      std::to_string(parts) + " partitions");
  }
  std::vector<RowRange> out;
  out.reserve(parts);
  const std::size_t base = rows / parts;
  const std::size_t extra = rows % parts;
  Coord at = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const auto len = static_cast<Coord>(base + (p < extra ? 1 : 0));
    out.push_back({at, at + len});
    at += len;
  }
  return out;
}

/// One worker's slice: owned rows plus halo rows above and below, held in
/// two equally shaped buffers (current and next).
template <typename T>
struct Partition {
  RowRange owned;
  std::size_t top_halo = 0;
  std::size_t bottom_halo = 0;
  std::optional<std::size_t> prev;
  std::optional<std::size_t> next;
  std::vector<T> front;
  std::vector<T> back;

  Coord first_row() const noexcept { return owned.begin - static_cast<Coord>(top_halo); }
  std::size_t buffer_rows() const noexcept { return top_halo + owned.size() + bottom_halo; }
};

/// Row block copied from one partition's current buffer into another's halo.
struct HaloCopy {
  std::size_t dst = 0;
  std::size_t src = 0;
  Coord first_row = 0;
  std::size_t rows = 0;
};

template <typename T>
class PartitionSet {
 public:
  PartitionSet() = default;

  std::size_t count() const noexcept { return parts_.size(); }
  int radius() const noexcept { return k_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Partition<T>& operator[](std::size_t p) const { return parts_[p]; }
  Partition<T>& operator[](std::size_t p) { return parts_[p]; }

  const std::vector<HaloCopy>& halo_plan() const noexcept { return plan_; }

  CopyLedger& ledger() noexcept { return ledger_; }
  const CopyLedger& ledger() const noexcept { return ledger_; }
  std::size_t buffer_allocations() const noexcept { return allocations_; }

  PlaneView<T> front_view(std::size_t p) const { return view(p, parts_[p].front); }
  PlaneView<T> back_view(std::size_t p) const { return view(p, parts_[p].back); }

  bool same_geometry(const Grid<T>& a, std::size_t count, int k) const {
    return a.dims() == dims_ && count == parts_.size() && k == k_;
  }

  /// Builds partitions for `a` and performs the initial load.
  static PartitionSet build(const Grid<T>& a, std::size_t count, int k) {
    if (k < 0) throw ConfigError("stencil radius must be non-negative");
    PartitionSet ps;
    ps.dims_ = a.dims();
    ps.rows_ = a.rows();
    ps.cols_ = a.cols();
    ps.rank_ = a.rank();
    ps.k_ = k;
    const auto ranges = split_rows(a.rows(), count);
    const auto radius = static_cast<Coord>(k);
    for (std::size_t p = 0; p < count; ++p) {
      Partition<T> part;
      part.owned = ranges[p];
      part.top_halo = static_cast<std::size_t>(std::min(radius, part.owned.begin));
      part.bottom_halo = static_cast<std::size_t>(
          std::min(radius, static_cast<Coord>(a.rows()) - part.owned.end));
      if (p > 0) part.prev = p - 1;
      if (p + 1 < count) part.next = p + 1;
      part.front.resize(part.buffer_rows() * ps.cols_);
      part.back.resize(part.buffer_rows() * ps.cols_);
      ps.allocations_ += 2;
      ps.parts_.push_back(std::move(part));
    }
    ps.plan_halos();
    ps.fill(a);
    return ps;
  }

  /// Reloads a grid of the same geometry into the existing buffers.
  void fill(const Grid<T>& a) {
    ledger_.reset();
    for (auto& part : parts_) {
      const auto first = static_cast<std::size_t>(part.first_row()) * cols_;
      const auto count = part.buffer_rows() * cols_;
      std::copy_n(a.data().begin() + static_cast<std::ptrdiff_t>(first), count,
                  part.front.begin());
      ledger_.fill_events += 1;
      ledger_.full_fill_elems += part.owned.size() * cols_;
      ledger_.fill_halo_elems += (part.top_halo + part.bottom_halo) * cols_;
    }
  }

  void clear_allocation_count() noexcept { allocations_ = 0; }

 private:
  PlaneView<T> view(std::size_t p, const std::vector<T>& buffer) const {
    const auto& part = parts_[p];
    return {buffer.data(), part.first_row(), part.buffer_rows(), cols_, rows_, rank_};
  }

  std::size_t owner_of(Coord row) const {
    for (std::size_t q = 0; q < parts_.size(); ++q) {
      if (row >= parts_[q].owned.begin && row < parts_[q].owned.end) return q;
    }
    return parts_.size();
  }

  void plan_halos() {
    plan_.clear();
    for (std::size_t p = 0; p < parts_.size(); ++p) {
      const auto& part = parts_[p];
      auto add_rows = [&](Coord from, Coord to) {
        for (Coord r = from; r < to;) {
          const std::size_t q = owner_of(r);
          const Coord stop = std::min(to, parts_[q].owned.end);
          plan_.push_back({p, q, r, static_cast<std::size_t>(stop - r)});
          r = stop;
        }
      };
      add_rows(part.first_row(), part.owned.begin);
      add_rows(part.owned.end, part.owned.end + static_cast<Coord>(part.bottom_halo));
    }
  }

  std::vector<Partition<T>> parts_;
  std::vector<HaloCopy> plan_;
  std::vector<std::size_t> dims_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 1;
  int rank_ = 1;
  int k_ = 0;
  CopyLedger ledger_;
  std::size_t allocations_ = 0;
};

/// Splits `a` by rows across `count` partitions with halos of depth `k`
/// and loads every partition (owned rows plus halos).
template <typename T>
PartitionSet<T> partition(const Grid<T>& a, std::size_t count, int k) {
  return PartitionSet<T>::build(a, count, k);
}

namespace detail {

template <typename T, typename Task>
void for_each_partition(PartitionSet<T>& ps, WorkerGroup* workers, Task&& task) {
  if (workers != nullptr && workers->size() == ps.count() && ps.count() > 1) {
    workers->run([&](std::size_t p) { task(p); });
  } else {
    for (std::size_t p = 0; p < ps.count(); ++p) task(p);
  }
}

}  // namespace detail

/// Copies each partition's halo rows from the owners' current buffers.
/// Every partition writes only its own halo region.
template <typename T>
void halo_exchange(PartitionSet<T>& ps, WorkerGroup* workers = nullptr) {
  if (ps.halo_plan().empty()) return;
  const std::size_t cols = ps.cols();
  detail::for_each_partition(ps, workers, [&](std::size_t p) {
    auto& dst = ps[p];
    for (const HaloCopy& copy : ps.halo_plan()) {
      if (copy.dst != p) continue;
      const auto& src = ps[copy.src];
      const auto src_off = static_cast<std::size_t>(copy.first_row - src.first_row()) * cols;
      const auto dst_off = static_cast<std::size_t>(copy.first_row - dst.first_row()) * cols;
      std::copy_n(src.front.begin() + static_cast<std::ptrdiff_t>(src_off), copy.rows * cols,
                  dst.front.begin() + static_cast<std::ptrdiff_t>(dst_off));
    }
  });
  for (const HaloCopy& copy : ps.halo_plan()) {
    ps.ledger().halo_events += 1;
    ps.ledger().halo_elems += copy.rows * cols;
  }
}

template <typename T>
void swap_buffers(PartitionSet<T>& ps) {
  for (std::size_t p = 0; p < ps.count(); ++p) std::swap(ps[p].front, ps[p].back);
}

/// Gathers every partition's owned rows into a host grid.
template <typename T>
Grid<T> read_back(PartitionSet<T>& ps) {
  std::vector<T> out(ps.rows() * ps.cols());
  for (std::size_t p = 0; p < ps.count(); ++p) {
    const auto& part = ps[p];
    const auto count = part.owned.size() * ps.cols();
    std::copy_n(part.front.begin() + static_cast<std::ptrdiff_t>(part.top_halo * ps.cols()),
                count,
                out.begin() + static_cast<std::ptrdiff_t>(
                                  static_cast<std::size_t>(part.owned.begin) * ps.cols()));
    ps.ledger().readback_events += 1;
    ps.ledger().readback_elems += count;
  }
  return Grid<T>(ps.dims(), std::move(out));
}

template <typename R>
struct StepResult {
  std::vector<R> partials;
  R combined;
};

/// Runs one sweep on every partition: stencil over owned rows from the
/// current buffer into the next buffer, with a partial reduce per
/// partition. Partials are combined on the calling thread in ascending
/// partition order, seeded with the identity.
template <typename T, typename Body>
StepResult<typename Body::reduce_type> parallel_sweep(PartitionSet<T>& ps, const Body& body,
                                                      WorkerGroup* workers = nullptr) {
  using R = typename Body::reduce_type;
  std::vector<R> partials(ps.count(), body.combine.identity);
  detail::for_each_partition(ps, workers, [&](std::size_t p) {
    auto& part = ps[p];
    const auto view = ps.front_view(p);
    T* dst = part.back.data() + part.top_halo * ps.cols();
    try {
      partials[p] = sweep_rows(body, view, dst, part.owned.begin, part.owned.end);
    } catch (const KernelError& e) {
      const Index global = e.index();
      throw KernelError(global, p, Index{global.row - part.owned.begin, global.col}, e.cause());
    }
  });
  R combined = body.combine.identity;
  for (const R& partial : partials) combined = body.combine(combined, partial);
  return {std::move(partials), combined};
}

/// parallel_sweep with a plain elemental function f(neighborhood[, env]),
/// reducing the new values.
template <typename T, typename F, typename R, typename Op, typename E = std::monostate>
StepResult<R> parallel_step(PartitionSet<T>& ps, const F& f, const Combinator<R, Op>& op,
                            const Env<E>& env = Env<E>{}, WorkerGroup* workers = nullptr) {
  auto kernel = [&](const Neighborhood<T>& nb) -> T {
    return static_cast<T>(detail::call_elemental(f, nb, env));
  };
  auto contribution = [](const T& next, const T&) -> R { return static_cast<R>(next); };
  const auto body = make_step_body<T>(ps.radius(), kernel, contribution, op);
  return parallel_sweep(ps, body, workers);
}

/// Executor spreading each loop run over P long-lived workers. The worker
/// group and partition buffers survive across runs of the same geometry.
template <typename T>
class PartitionedExecutor {
 public:
  using value_type = T;

  PartitionedExecutor(DeploymentMode mode, std::size_t partitions)
      : mode_(mode), partitions_(partitions) {
    validate_deployment(mode, partitions);
    if (partitions > 1) workers_ = std::make_unique<WorkerGroup>(partitions);
  }

  /// 1:1 for a single partition, 1:n otherwise.
  explicit PartitionedExecutor(std::size_t partitions)
      : PartitionedExecutor(partitions > 1 ? DeploymentMode::OneToN : DeploymentMode::OneToOne,
                            partitions) {}

  DeploymentMode mode() const noexcept { return mode_; }
  std::size_t workers() const noexcept { return partitions_; }

  void load(const Grid<T>& a, int radius) {
    if (set_ && set_->same_geometry(a, partitions_, radius)) {
      set_->clear_allocation_count();
      set_->fill(a);
    } else {
      set_ = PartitionSet<T>::build(a, partitions_, radius);
    }
  }

  template <typename Body>
  typename Body::reduce_type sweep(const Body& body) {
    auto step = parallel_sweep(*set_, body, workers_.get());
    return step.combined;
  }

  void advance(bool continuing) {
    swap_buffers(*set_);
    if (continuing) halo_exchange(*set_, workers_.get());
  }

  Grid<T> read_back() { return slr::read_back(*set_); }

  const CopyLedger& ledger() const { return set_->ledger(); }
  std::size_t buffer_allocations() const { return set_ ? set_->buffer_allocations() : 0; }
  const PartitionSet<T>& partitions() const { return *set_; }

 private:
  DeploymentMode mode_;
  std::size_t partitions_;
  std::unique_ptr<WorkerGroup> workers_;
  std::optional<PartitionSet<T>> set_;
};

/// Plain loop-of-stencil-reduce on a partitioned executor.
template <typename T, typename F, typename R, typename Op, typename Pred,
          typename E = std::monostate>
LoopResult<T, R> parallel_loop(DeploymentMode mode, std::size_t partitions, int k, const F& f,
                               const Combinator<R, Op>& op, const Condition<Pred>& cond,
                               const Grid<T>& a, const Env<E>& env = Env<E>{}) {
  PartitionedExecutor<T> exec(mode, partitions);
  return loop_stencil_reduce(k, f, op, cond, a, env, exec);
}

}  // namespace slr
