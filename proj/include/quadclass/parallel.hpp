#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace quadclass {

/* Runs fn(i) for i in [0, n) on a fixed pool of `workers` threads pulling
 * indices from a shared counter. Results come back in index order, so the
 * output does not depend on the worker count or on completion order. The
 * first exception thrown by any task is rethrown after the pool joins. */
template <class Fn>
auto parallel_map(std::size_t n, unsigned workers, Fn && fn)
{
    using R = decltype(fn(std::size_t{}));
    std::vector<R> out(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    unsigned count = static_cast<unsigned>(std::min<std::size_t>(std::max(workers, 1u), std::max<std::size_t>(n, 1)));
    if (count == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(count);
        for (unsigned t = 0; t < count; ++t)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

} // namespace quadclass
