#pragma once

#include <cstddef>
#include <functional>

namespace afc {

/// Worker count used when a caller passes 0. Defaults to hardware concurrency.
std::size_t default_thread_count();
void set_default_thread_count(std::size_t threads);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is visited once;
/// the first exception thrown by any worker is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace afc
