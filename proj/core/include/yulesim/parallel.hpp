#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace yulesim {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// (count, sum, sum of squares) triple with mean and standard error.
class MomentAccumulator {
 public:
  void add(double x) noexcept {
    ++count_;
    sum_.add(x);
    sum_sq_.add(x * x);
  }

  void merge(const MomentAccumulator& other) noexcept {
    count_ += other.count_;
    sum_.merge(other.sum_);
    sum_sq_.merge(other.sum_sq_);
  }

  std::uint64_t count() const noexcept { return count_; }
  double sum() const noexcept { return sum_.value(); }
  double sum_of_squares() const noexcept { return sum_sq_.value(); }

  double mean() const noexcept { return count_ == 0 ? 0.0 : sum() / static_cast<double>(count_); }

  /// Unbiased sample variance.
  double variance() const noexcept {
    if (count_ < 2) return 0.0;
    const double n = static_cast<double>(count_);
    const double m = mean();
    const double v = (sum_of_squares() - n * m * m) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }

  /// Standard error of the mean.
  double stderr_of_mean() const noexcept {
    if (count_ < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(count_));
  }

 private:
  std::uint64_t count_ = 0;
  CompensatedSum sum_;
  CompensatedSum sum_sq_;
};

/// Replicates are grouped into blocks of this many consecutive indices. The
/// block layout depends only on the replicate count, never on the thread
/// count, which is what makes reductions reproducible.
inline constexpr std::uint64_t kReplicateBlock = 2048;

/// Default worker count: YULESIM_THREADS if set and positive, otherwise the
/// hardware concurrency.
unsigned default_thread_count();

/// Evaluates `block_fn(begin, end)` for every block of [0, count) on up to
/// `threads` workers and returns the per-block results ordered by block
/// index. `block_fn` must be safe to call concurrently.
template <class BlockFn>
auto map_blocks(std::uint64_t count, unsigned threads, BlockFn block_fn,
                std::uint64_t block_size = kReplicateBlock)
    -> std::vector<decltype(block_fn(std::uint64_t{}, std::uint64_t{}))> {
  using Result = decltype(block_fn(std::uint64_t{}, std::uint64_t{}));
  const std::uint64_t blocks = (count + block_size - 1) / block_size;
  std::vector<Result> results(blocks);
  if (blocks == 0) return results;

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= blocks) return;
      const std::uint64_t begin = b * block_size;
      const std::uint64_t end = std::min(count, begin + block_size);
      try {
        results[b] = block_fn(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks, std::memory_order_relaxed);
        return;
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), blocks));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// map_blocks followed by an in-order merge of the block results.
template <class Acc, class BlockFn>
Acc reduce_blocks(std::uint64_t count, unsigned threads, BlockFn block_fn) {
  auto parts = map_blocks(count, threads, block_fn);
  Acc total{};
  for (const auto& part : parts) total.merge(part);
  return total;
}

}  // namespace yulesim
