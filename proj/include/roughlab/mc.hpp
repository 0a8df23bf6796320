#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace roughlab {

// Flag value, else ROUGH_ERROR_LAB_THREADS, else 1.
int resolve_threads(std::optional<int> flag);

// Runs fn(i) for i in [0, count) on `threads` workers; results are stored by index,
// so the output does not depend on scheduling. The lowest failing index is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, int threads, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out(count);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  std::size_t error_index = count;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(count, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

struct SampleStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;           // unbiased
  double std_error = 0.0;          // of the mean
  double variance_std_error = 0.0; // of the variance, from the fourth central moment
};

SampleStats sample_stats(const std::vector<double>& x);

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope
  std::size_t points = 0;
};

// OLS of y on x; requires at least `min_points` points.
RegressionFit ols(const std::vector<double>& x, const std::vector<double>& y,
                  std::size_t min_points = 5);

struct McEstimate {
  int level = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  double estimate = 0.0;  // statistic derived from the mean (e.g. L2 norm)
};

struct McReport {
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  std::vector<McEstimate> estimates;
  RegressionFit fit;
  bool degenerate = false;  // all errors at machine zero; slope undefined
};

double median(std::vector<double> x);

}  // namespace roughlab
