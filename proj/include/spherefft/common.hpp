#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace spherefft {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Thrown when an argument violates a documented contract (sizes, ranges,
/// unknown names). The message names the expected and the actual value.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown on file-format or filesystem problems; the message carries the
/// path and, for text formats, the offending line number.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::atomic<int>& thread_override() {
  static std::atomic<int> n{0};
  return n;
}

}  // namespace detail

/// Caps worker threads programmatically; 0 restores the SPHEREFFT_THREADS /
/// hardware_concurrency default.
inline void set_max_threads(int n) { detail::thread_override().store(n); }

inline int max_threads() {
  if (int n = detail::thread_override().load(); n > 0) return n;
  if (const char* env = std::getenv("SPHEREFFT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [begin, end). Work is split into contiguous chunks,
/// one per worker; falls back to a plain loop for small ranges.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn,
                  std::size_t min_per_thread = 8) {
  if (end <= begin) return;
  std::size_t count = end - begin;
  std::size_t workers = std::min<std::size_t>(max_threads(), count / min_per_thread + 1);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = begin + w * chunk;
    std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace detail {

inline constexpr std::size_t kSumBlock = 1024;

/// Pairwise reduction of per-block partial sums. The tree shape depends only
/// on the term count, never on the thread count, so quadrature reductions are
/// reproducible bit for bit across runs.
template <class T>
T pairwise_merge(std::vector<T>& parts) {
  if (parts.empty()) return T{};
  std::size_t n = parts.size();
  while (n > 1) {
    std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) parts[i] = parts[2 * i] + parts[2 * i + 1];
    if (n % 2 == 1) {
      parts[half] = parts[n - 1];
      ++half;
    }
    n = half;
  }
  return parts[0];
}

}  // namespace detail

/// Deterministic sum of term(i) for i in [0, n): fixed 1024-term blocks are
/// accumulated sequentially (in parallel across blocks), then merged pairwise.
template <class T, class Term>
T block_sum(std::size_t n, Term&& term) {
  if (n == 0) return T{};
  std::size_t blocks = (n + detail::kSumBlock - 1) / detail::kSumBlock;
  std::vector<T> parts(blocks, T{});
  parallel_for(0, blocks, [&](std::size_t b) {
    std::size_t lo = b * detail::kSumBlock;
    std::size_t hi = std::min(n, lo + detail::kSumBlock);
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    parts[b] = acc;
  });
  return detail::pairwise_merge(parts);
}

}  // namespace spherefft
