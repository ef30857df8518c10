#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lerw {

// Runs trials 0..trials-1 over a worker pool.  Each worker owns one context;
// results land in a vector indexed by trial, so aggregation order (and hence
// every output value) is independent of the worker count.
template <class Result, class Context>
std::vector<Result> run_trials(std::int64_t trials, int workers,
                               const std::function<Context()>& make_context,
                               const std::function<Result(std::int64_t, Context&)>& trial) {
    std::vector<Result> results(static_cast<std::size_t>(trials));
    if (trials == 0) return results;
    workers = int(std::min<std::int64_t>(std::max(1, workers), trials));

    if (workers == 1) {
        Context ctx = make_context();
        for (std::int64_t i = 0; i < trials; ++i) results[std::size_t(i)] = trial(i, ctx);
        return results;
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                Context ctx = make_context();
                for (;;) {
                    std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= trials) return;
                    results[std::size_t(i)] = trial(i, ctx);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(trials, std::memory_order_relaxed);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

int default_worker_count();

}  // namespace lerw
