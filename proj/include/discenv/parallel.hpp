#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace discenv {

/// Worker count used when a caller passes threads <= 0; initially the
/// hardware concurrency.
int default_threads() noexcept;
void set_default_threads(int n) noexcept;

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once, so writing results into slot i keeps the output
/// independent of the worker count. The first exception is rethrown after
/// all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

template <class T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    parallel_for(n, threads, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

} // namespace discenv
