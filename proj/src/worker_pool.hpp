#ifndef AMRBENCH_WORKER_POOL_HPP_
#define AMRBENCH_WORKER_POOL_HPP_
//! \file worker_pool.hpp
//! \brief Persistent thread pool with statically chunked parallel_for.
//!  Work assignment depends only on (count, size), never on timing, so any
//!  pool size produces the same writes.

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace amrbench {

class WorkerPool {
 public:
  explicit WorkerPool(int num_workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool &) = delete;
  WorkerPool &operator=(const WorkerPool &) = delete;

  int size() const { return size_; }

  //! Run body(i) for i in [0, count). The calling thread executes chunk 0;
  //! bodies must only write state owned by their index. Exceptions are
  //! rethrown on the calling thread (first one wins).
  void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

 private:
  void worker_loop(int worker_id);
  void run_chunk(int worker_id);

  int size_ = 1;
  std::vector<std::thread> threads_;

  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  std::uint64_t generation_ = 0;
  int pending_ = 0;
  bool stopping_ = false;
  std::size_t count_ = 0;
  const std::function<void(std::size_t)> *body_ = nullptr;
  std::exception_ptr first_error_;
};

} // namespace amrbench

#endif // AMRBENCH_WORKER_POOL_HPP_
