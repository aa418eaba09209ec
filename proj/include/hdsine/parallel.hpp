#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hdsine {

/// Worker count from HDSINE_THREADS, else the hardware concurrency.
inline int worker_count()
{
    if (const char* env = std::getenv("HDSINE_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) {
                return n;
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

/// Calls body(i) for every i in [0, count) on a pool of workers, each taking a
/// contiguous block. The first exception thrown by any body is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body, int workers = worker_count())
{
    const auto pool = static_cast<std::size_t>(std::max(1, workers));
    if (pool == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex guard;
    std::vector<std::thread> threads;
    const std::size_t block = (count + pool - 1) / pool;
    for (std::size_t start = 0; start < count; start += block) {
        const std::size_t stop = std::min(count, start + block);
        threads.emplace_back([&, start, stop] {
            try {
                for (std::size_t i = start; i < stop; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace hdsine
