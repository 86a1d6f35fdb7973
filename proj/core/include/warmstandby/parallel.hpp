#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace warmstandby {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Index i is always
/// handled by worker i % threads, and callers write results by index, so the
/// output never depends on scheduling. If several indices throw, the
/// exception of the lowest index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_index(workers, n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          try {
            fn(i);
          } catch (...) {
            errors[w] = std::current_exception();
            error_index[w] = i;
            return;
          }
        }
      });
    }
  }
  std::size_t first = n;
  std::exception_ptr first_error;
  for (std::size_t w = 0; w < workers; ++w) {
    if (errors[w] && error_index[w] < first) {
      first = error_index[w];
      first_error = errors[w];
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace warmstandby
