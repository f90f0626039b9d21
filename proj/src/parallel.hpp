#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace coarrest::detail {

// Runs body(i) for i in [0, count) on the OpenMP pool. An exception must not
// leave a parallel region, so the first one is captured and rethrown here.
template <class Body>
void parallel_for(std::ptrdiff_t count, Body&& body) {
  std::exception_ptr failure;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace coarrest::detail
