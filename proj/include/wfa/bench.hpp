#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

namespace wfa::bench {

// The baseline the wait-free counter is compared against: a read-modify-
// write CAS loop. Lock-free but not wait-free.
class NaiveCounter {
public:
    std::int64_t fetch_and_add(std::int64_t x) {
        std::int64_t old = value_.load(std::memory_order_relaxed);
        while (!value_.compare_exchange_weak(old, old + x, std::memory_order_seq_cst,
                                             std::memory_order_relaxed)) {
        }
        return old;
    }
    std::int64_t read() const { return value_.load(std::memory_order_seq_cst); }

private:
    std::atomic<std::int64_t> value_{0};
};

struct BenchConfig {
    std::string impl = "waitfree";  // waitfree | naive
    int threads = 1;
    double duration_s = 20.0;
    bool pin_per_core = false;
};

struct BenchResult {
    std::string impl;
    int threads = 0;
    double elapsed_s = 0.0;
    std::vector<std::uint64_t> per_thread_ops;
    std::uint64_t total_ops = 0;
    double ns_per_op = 0.0;
};

// Spawns cfg.threads workers that increment the chosen counter in a loop
// until the duration elapses, then validates conservation (final counter
// value equals the summed local op counts). Throws std::runtime_error on
// config errors or a conservation failure.
BenchResult run_bench(const BenchConfig& cfg);

// Writes `impl,threads,seconds,total_ops,ns_per_op` rows. Errors (empty
// results, unwritable path) throw with the path in the message; no file is
// created on error.
void emit_csv(const std::vector<BenchResult>& results, const std::string& path);

}  // namespace wfa::bench
