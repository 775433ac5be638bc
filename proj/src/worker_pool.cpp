//! \file worker_pool.cpp

#include "worker_pool.hpp"

#include <algorithm>

namespace amrbench {

WorkerPool::WorkerPool(int num_workers) : size_(std::max(1, num_workers)) {
  threads_.reserve(size_ - 1);
  for (int w = 1; w < size_; ++w) {
    threads_.emplace_back([this, w] { worker_loop(w); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  start_cv_.notify_all();
  for (auto &t : threads_) t.join();
}

void WorkerPool::run_chunk(int worker_id) {
  const std::size_t begin = count_ * worker_id / size_;
  const std::size_t end = count_ * (worker_id + 1) / size_;
  try {
    for (std::size_t i = begin; i < end; ++i) (*body_)(i);
  } catch (...) {
    std::lock_guard lock(mutex_);
    if (!first_error_) first_error_ = std::current_exception();
  }
}

void WorkerPool::worker_loop(int worker_id) {
  std::uint64_t seen = 0;
  while (true) {
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
    }
    run_chunk(worker_id);
    {
      std::lock_guard lock(mutex_);
      if (--pending_ == 0) done_cv_.notify_all();
    }
  }
}

void WorkerPool::parallel_for(std::size_t count,
                              const std::function<void(std::size_t)> &body) {
  if (count == 0) return;
  if (size_ == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    count_ = count;
    body_ = &body;
    first_error_ = nullptr;
    pending_ = size_ - 1;
    ++generation_;
  }
  start_cv_.notify_all();
  run_chunk(0);
  std::exception_ptr err;
  {
    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [&] { return pending_ == 0; });
    body_ = nullptr;
    err = first_error_;
  }
  if (err) std::rethrow_exception(err);
}

} // namespace amrbench
