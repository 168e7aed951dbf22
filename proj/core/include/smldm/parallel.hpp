#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace smldm {

/// Worker count; 0 means "use hardware concurrency".
struct Parallelism {
    unsigned jobs = 1;

    unsigned resolved() const
    {
        if (jobs != 0) return jobs;
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Each index is
/// processed exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, Parallelism par, Fn&& fn)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(par.resolved(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// Fixed block partition of `items` trials. The partition depends only on
/// the item count, never on the worker count.
inline constexpr std::size_t kTrialBlock = 8192;

inline std::size_t block_count(std::size_t items)
{
    return (items + kTrialBlock - 1) / kTrialBlock;
}

}  // namespace smldm
