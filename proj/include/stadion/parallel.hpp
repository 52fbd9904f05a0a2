#ifndef STADION_PARALLEL_HPP
#define STADION_PARALLEL_HPP

// Index-parallel evaluation with results stored by index, so the output
// never depends on the worker count or on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace stadion {

/// Worker count from an explicit request, else the environment variable
/// STADION_WORKERS, else the hardware concurrency.
int resolve_workers(int requested);

template <class R, class F>
std::vector<R> parallel_map(std::size_t count, int workers, F&& fn)
{
    std::vector<R> out(count);
    const std::size_t nthreads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                                         std::max<std::size_t>(count, 1));
    if (nthreads == 1) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next++; i < count; i = next++)
                    out[i] = fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

} // namespace stadion

#endif
