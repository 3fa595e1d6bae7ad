#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "geoinf/error.hpp"
#include "geoinf/measure.hpp"

namespace geoinf {

/// Monte Carlo settings. The seed is mandatory; there is no entropy default.
struct McConfig {
  explicit McConfig(std::uint64_t seed_, std::size_t samples_ = 100000, unsigned workers_ = 1)
      : seed(seed_), samples(samples_), workers(workers_) {}

  std::uint64_t seed;
  std::size_t samples;
  unsigned workers;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// First and second raw moments of several per-sample statistics.
class Moments {
 public:
  explicit Moments(std::size_t stats = 0) : sum_(stats, 0.0), sum_sq_(stats, 0.0) {}

  std::size_t stats() const noexcept { return sum_.size(); }
  std::size_t count() const noexcept { return count_; }

  void add(std::span<const double> values) {
    for (std::size_t k = 0; k < sum_.size(); ++k) {
      sum_[k] += values[k];
      sum_sq_[k] += values[k] * values[k];
    }
    ++count_;
  }

  void merge(const Moments& other) {
    for (std::size_t k = 0; k < sum_.size(); ++k) {
      sum_[k] += other.sum_[k];
      sum_sq_[k] += other.sum_sq_[k];
    }
    count_ += other.count_;
  }

  double mean(std::size_t k) const { return count_ ? sum_[k] / static_cast<double>(count_) : 0.0; }

  /// Unbiased sample variance.
  double variance(std::size_t k) const {
    if (count_ < 2) return 0.0;
    const double n = static_cast<double>(count_);
    const double v = (sum_sq_[k] - sum_[k] * sum_[k] / n) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }

  /// Sample standard deviation over sqrt(count).
  double std_error(std::size_t k) const {
    return count_ ? std::sqrt(variance(k) / static_cast<double>(count_)) : 0.0;
  }

  Estimate estimate(std::size_t k) const { return {mean(k), std_error(k)}; }

 private:
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::size_t count_ = 0;
};

namespace detail {
inline constexpr std::size_t kChunk = 1024;
}

/// Runs `cfg.samples` draws from `space` and accumulates `stats` per-sample
/// statistics. `make_body()` is called once per worker and must return a
/// callable `void(std::span<const double> x, std::span<double> out)`.
///
/// Samples are grouped in fixed chunks; chunk moments are reduced in chunk
/// order, so the result is bit-identical for any worker count.
template <class MakeBody>
Moments monte_carlo(const ProductSpace& space, const McConfig& cfg, std::size_t stats, MakeBody&& make_body) {
  const std::size_t n = space.dim();
  const std::size_t chunks = (cfg.samples + detail::kChunk - 1) / detail::kChunk;
  std::vector<Moments> partial(chunks, Moments(stats));
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    try {
      auto body = make_body();
      std::vector<double> x(n);
      std::vector<double> out(stats);
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= chunks) break;
        const std::size_t begin = c * detail::kChunk;
        const std::size_t end = std::min(cfg.samples, begin + detail::kChunk);
        for (std::size_t k = begin; k < end; ++k) {
          space.sample_point(cfg.seed, k, x);
          body(std::span<const double>(x), std::span<double>(out));
          partial[c].add(out);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  Moments total(stats);
  for (const Moments& m : partial) total.merge(m);
  return total;
}

}  // namespace geoinf
