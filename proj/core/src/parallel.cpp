#include "mvh/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mvh {

int num_threads() {
    if (const char* env = std::getenv("MVH_NUM_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n < 1) n = 1;
            if (n > 64) n = 64;
            return n;
        } catch (...) {
            // fall through to hardware default
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(std::int64_t n, std::int64_t chunk_size,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    if (chunk_size < 1) chunk_size = 1;
    const std::int64_t n_chunks = (n + chunk_size - 1) / chunk_size;
    int workers = num_threads();
    if (workers > n_chunks) workers = static_cast<int>(n_chunks);

    if (workers <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) {
            const std::int64_t b = c * chunk_size;
            const std::int64_t e = std::min(n, b + chunk_size);
            fn(c, b, e);
        }
        return;
    }

    // Chunk boundaries are fixed by chunk_size alone, so any reduction keyed on
    // chunk index is independent of the worker count.
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&]() {
        for (;;) {
            const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) return;
            const std::int64_t b = c * chunk_size;
            const std::int64_t e = std::min(n, b + chunk_size);
            try {
                fn(c, b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace mvh
