#include "slr/worker_group.hpp"

#include <stdexcept>

namespace slr {

WorkerGroup::WorkerGroup(std::size_t size) : errors_(size) {
  if (size == 0) throw std::invalid_argument("worker group needs at least one worker");
  threads_.reserve(size);
  for (std::size_t id = 0; id < size; ++id) {
    threads_.emplace_back([this, id] { worker_loop(id); });
  }
}

WorkerGroup::~WorkerGroup() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  start_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerGroup::run(const std::function<void(std::size_t)>& task) {
  std::unique_lock lock(mutex_);
  task_ = &task;
  pending_ = threads_.size();
  for (auto& e : errors_) e = nullptr;
  ++generation_;
  start_.notify_all();
  done_.wait(lock, [this] { return pending_ == 0; });
  task_ = nullptr;
  for (const auto& e : errors_) {
    if (e) std::rethrow_exception(e);
  }
}

void WorkerGroup::worker_loop(std::size_t id) {
  std::uint64_t seen = 0;
  for (;;) {
    const std::function<void(std::size_t)>* task = nullptr;
    {
      std::unique_lock lock(mutex_);
      start_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
      task = task_;
    }
    std::exception_ptr error;
    try {
      (*task)(id);
    } catch (...) {
      error = std::current_exception();
    }
    {
      std::lock_guard lock(mutex_);
      errors_[id] = error;
      if (--pending_ == 0) done_.notify_one();
    }
  }
}

}  // namespace slr
