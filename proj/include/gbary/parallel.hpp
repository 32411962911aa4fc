#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gbary {

/// Worker count for `requested` (0 = hardware concurrency), capped at `tasks`.
inline unsigned resolve_workers(unsigned requested, std::size_t tasks)
{
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (tasks < n)
        n = static_cast<unsigned>(std::max<std::size_t>(tasks, 1));
    return n;
}

/// Calls fn(task, worker) for task in [0, tasks) on `workers` threads.
/// Tasks must write only to their own output slot; results are therefore
/// independent of scheduling. The first exception thrown is rethrown.
template <typename Fn>
void parallel_for(std::size_t tasks, unsigned workers, Fn&& fn)
{
    if (workers <= 1 || tasks <= 1) {
        for (std::size_t i = 0; i < tasks; ++i)
            fn(i, 0u);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = next++; i < tasks; i = next++) {
                    try {
                        fn(i, w);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                        next = tasks;
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace gbary
