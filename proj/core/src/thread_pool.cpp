#include "hemoflow/thread_pool.hpp"

#include <algorithm>

namespace hemoflow {

ThreadPool::ThreadPool(int threads) : n_threads_(std::max(1, threads)) {
  for (int i = 0; i + 1 < n_threads_; ++i)
    workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lock(mtx_);
    stop_ = true;
  }
  cv_start_.notify_all();
  for (auto &w : workers_)
    w.join();
}

void ThreadPool::worker_loop() {
  long seen = 0;
  for (;;) {
    const std::function<void(int)> *job = nullptr;
    {
      std::unique_lock<std::mutex> lock(mtx_);
      cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_)
        return;
      seen = generation_;
      job = job_;
    }
    for (;;) {
      int chunk;
      {
        std::lock_guard<std::mutex> lock(mtx_);
        if (next_chunk_ >= job_chunks_)
          break;
        chunk = next_chunk_++;
      }
      (*job)(chunk);
      std::lock_guard<std::mutex> lock(mtx_);
      if (--pending_ == 0)
        cv_done_.notify_all();
    }
  }
}

void ThreadPool::parallel_chunks(int n_chunks,
                                 const std::function<void(int)> &fn) {
  if (n_chunks <= 0)
    return;
  if (n_threads_ == 1 || n_chunks == 1) {
    for (int c = 0; c < n_chunks; ++c)
      fn(c);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mtx_);
    job_ = &fn;
    job_chunks_ = n_chunks;
    next_chunk_ = 0;
    pending_ = n_chunks;
    ++generation_;
  }
  cv_start_.notify_all();
  // The caller participates too.
  for (;;) {
    int chunk;
    {
      std::lock_guard<std::mutex> lock(mtx_);
      if (next_chunk_ >= job_chunks_)
        break;
      chunk = next_chunk_++;
    }
    fn(chunk);
    std::lock_guard<std::mutex> lock(mtx_);
    if (--pending_ == 0)
      cv_done_.notify_all();
  }
  std::unique_lock<std::mutex> lock(mtx_);
  cv_done_.wait(lock, [&] { return pending_ == 0; });
  job_ = nullptr;
}

} // namespace hemoflow
