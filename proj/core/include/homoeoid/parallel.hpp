#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace homoeoid
{
//! Active worker count: explicit override, else HOMOEOID_THREADS, else hardware.
int worker_count();

//! Override the worker count for this process; 0 restores the default.
void set_worker_count(int workers);

/*!
 * Evaluate f(0), ..., f(count - 1) on a transient thread pool.
 *
 * Results come back in index order, so any reduction over them is
 * independent of how items were scheduled.
 */
template<class R, class F>
std::vector<R> parallel_map(std::size_t count, F&& f)
{
    std::vector<R> out(count);
    std::size_t const workers
        = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = f(i);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;)
        {
            std::size_t const i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                out[i] = f(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

}  // namespace homoeoid
