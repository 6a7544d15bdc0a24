#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace heatex {

//! Run body(i) for i in [0, count) on up to `workers` threads.
//!
//! Indices are split into contiguous chunks; results must be written by
//! index so the outcome does not depend on the worker count. The first
//! exception thrown (lowest chunk) is rethrown after all threads join.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  if (count == 0) return;
  std::size_t const n_threads =
      std::clamp<std::size_t>(workers, 1, count);
  if (n_threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n_threads);
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    std::size_t const begin = count * t / n_threads;
    std::size_t const end = count * (t + 1) / n_threads;
    threads.emplace_back([&, t, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace heatex
