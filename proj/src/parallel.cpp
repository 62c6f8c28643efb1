#include "discenv/parallel.hpp"

#include <algorithm>

namespace discenv {
namespace {

std::atomic<int>& thread_setting() {
    static std::atomic<int> n{std::max(1u, std::thread::hardware_concurrency())};
    return n;
}

} // namespace

int default_threads() noexcept { return thread_setting().load(); }

void set_default_threads(int n) noexcept {
    thread_setting().store(n > 0 ? n : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 0) threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace discenv
