#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace ipslab::harness {

inline std::size_t default_workers() {
    const auto hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Evaluates f(r) for r = 0..count-1 on a pool of workers. Slot r of the result
/// only ever holds f(r), so the output does not depend on the worker count or
/// on scheduling. The first exception thrown by any task is rethrown.
template <class F>
auto run_replicas(std::size_t count, F&& f, std::size_t workers = 0) {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(count);
    if (workers == 0) workers = default_workers();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= count) return;
            try {
                out[r] = f(r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace ipslab::harness
