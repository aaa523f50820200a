#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace slr {

/// Fixed set of long-lived worker threads. `run` hands the same task to
/// every worker (each receives its worker id) and returns once all of them
/// have finished, which acts as the per-phase barrier.
class WorkerGroup {
 public:
  explicit WorkerGroup(std::size_t size);
  ~WorkerGroup();

  WorkerGroup(const WorkerGroup&) = delete;
  WorkerGroup& operator=(const WorkerGroup&) = delete;

  std::size_t size() const noexcept { return threads_.size(); }

  /// Runs task(id) for id in [0, size). If any worker throws, the exception
  /// from the lowest worker id is rethrown after all workers are done.
  void run(const std::function<void(std::size_t)>& task);

 private:
  void worker_loop(std::size_t id);

  std::mutex mutex_;
  std::condition_variable start_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::uint64_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
  std::vector<std::exception_ptr> errors_;
  std::vector<std::thread> threads_;
};

}  // namespace slr
