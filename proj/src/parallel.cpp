#include "osc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace osc {

namespace {
std::atomic<int> g_max_threads{1};
}

void set_max_threads(int threads)
{
    g_max_threads.store(std::max(1, threads));
}

int max_threads()
{
    return g_max_threads.load();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(max_threads()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    pool.clear();

    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace osc
