#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace wdt {

// Runs fn(i) for i in [0, count) on up to `threads` workers.  Tasks pull from
// a shared counter; results must be written by index into caller-owned
// storage, which keeps aggregate output independent of the thread count.
// The first exception thrown by any task is rethrown after all workers join.
inline void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    if (threads <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    int workers = std::min(threads, count);
    pool.reserve(static_cast<size_t>(workers));
    std::atomic<std::exception_ptr*> error_slot{&first_error};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    bool expected = false;
                    if (failed.compare_exchange_strong(expected, true))
                        *error_slot.load() = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load() && first_error) std::rethrow_exception(first_error);
}

}  // namespace wdt
