#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hemoflow {

/// Fork-join worker pool for chunked parallel loops.
///
/// Work is always split into a caller-chosen number of chunks that is
/// independent of the worker count, so any per-chunk accumulation reduced
/// in chunk order yields results that do not depend on the thread count.
/// With size() == 1 no worker threads exist and chunks run inline.
class ThreadPool {
public:
  explicit ThreadPool(int threads);
  ~ThreadPool();

  ThreadPool(const ThreadPool &) = delete;
  ThreadPool &operator=(const ThreadPool &) = delete;

  int size() const { return n_threads_; }

  /// Runs fn(chunk) for chunk in [0, n_chunks); blocks until done.
  void parallel_chunks(int n_chunks, const std::function<void(int)> &fn);

private:
  void worker_loop();

  int n_threads_ = 1;
  std::vector<std::thread> workers_;

  std::mutex mtx_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  const std::function<void(int)> *job_ = nullptr;
  int job_chunks_ = 0;
  int next_chunk_ = 0;
  int pending_ = 0;
  long generation_ = 0;
  bool stop_ = false;
};

} // namespace hemoflow
