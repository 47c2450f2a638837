// parallel.hpp
// Minimal deterministic work distribution: jobs indexed 0..n-1 are claimed
// by a fixed-size worker pool, results stored per index, and the caller
// folds them in ascending index order.  Chunk boundaries never depend on
// the thread count, so floating-point reductions stay bit-identical.

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace pfl {

// Runs job(i) for i in [0, n) on up to `threads` workers and returns the
// results indexed by i.  job must be callable from multiple threads.
template <class R, class Job>
std::vector<R> run_indexed(std::size_t n, unsigned threads, Job job) {
    std::vector<R> results(n);
    if (n == 0) return results;
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = job(i);
        return results;
    }
    unsigned workers = threads;
    if (workers > n) workers = static_cast<unsigned>(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                results[i] = job(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
    return results;
}

} // namespace pfl
