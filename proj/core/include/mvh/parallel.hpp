#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace mvh {

// Worker count: MVH_NUM_THREADS if set (clamped to [1, 64]), else the
// hardware concurrency. Results never depend on this value: work is split
// into fixed chunks and reduced in chunk order.
int num_threads();

// Runs fn(chunk_index, begin, end) over [0, n) split into chunks of
// chunk_size (the last one ragged). Chunk boundaries depend only on
// (n, chunk_size); threads grab chunks from a shared counter. Exceptions
// propagate to the caller.
void parallel_chunks(std::int64_t n, std::int64_t chunk_size,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

// Neumaier compensated accumulator; sequential use only.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace mvh
