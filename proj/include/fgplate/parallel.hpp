#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fgplate {

/// Runs f(i) for i in [0, n) on up to `threads` workers. Work items are
/// independent; callers store results by index so the outcome does not
/// depend on scheduling. threads <= 0 selects hardware concurrency.
template <typename F>
void parallel_for(int n, F&& f, int threads = 0) {
    if (n <= 0) return;
    int nw = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nw < 1) nw = 1;
    nw = std::min(nw, n);
    if (nw == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace fgplate
