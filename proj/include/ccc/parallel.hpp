#pragma once

// Deterministic parallel map over an index range.  Results land in index order,
// so output never depends on scheduling.  The worker count is capped by the
// CCC_THREADS environment variable (default: hardware concurrency).

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ccc {

inline unsigned worker_count()
{
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    if (const char* env = std::getenv("CCC_THREADS")) {
        try {
            long v = std::stol(env);
            if (v >= 1)
                return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return hw;
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn)
{
    std::vector<T> out(count);
    unsigned workers = worker_count();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = fn(i);
        return out;
    }
    if (workers > count)
        workers = static_cast<unsigned>(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = count;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(body);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

}  // namespace ccc
