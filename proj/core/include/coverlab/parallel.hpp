#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "coverlab/rng.hpp"

namespace coverlab {

inline unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs `body(replicate_index, stream)` for every replicate and returns the
// results indexed by replicate. Stream i is derived from (base key, 1 + i);
// index 0 is reserved for bookkeeping substreams. Workers pull indices from a
// shared counter, so results never depend on scheduling -- only on the index.
template <typename T, typename Body>
std::vector<T> run_replicates(std::size_t reps, const RngStream& base,
                              unsigned threads, Body&& body) {
    std::vector<T> results(reps);
    const unsigned nthreads = std::min<std::size_t>(resolve_thread_count(threads),
                                                    reps == 0 ? 1 : reps);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < reps; ++i) {
            RngStream stream = base.child(1 + i);
            results[i] = body(i, stream);
        }
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= reps || failed.load(std::memory_order_relaxed)) break;
            try {
                RngStream stream = base.child(1 + i);
                results[i] = body(i, stream);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
    return results;
}

}  // namespace coverlab
