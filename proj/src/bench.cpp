#include "wfa/bench.hpp"

#include <pthread.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wfa/faa.hpp"
#include "wfa/native_arena.hpp"

namespace wfa::bench {

namespace {

void try_pin_to_core(std::thread& t, int core) {
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(static_cast<unsigned>(core) % std::thread::hardware_concurrency(), &set);
    if (pthread_setaffinity_np(t.native_handle(), sizeof(set), &set) != 0)
        std::fprintf(stderr, "warning: could not pin thread to core %d; continuing unpinned\n", core);
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
    if (cfg.threads < 1) throw std::runtime_error("bench: threads must be >= 1");
    if (cfg.impl != "waitfree" && cfg.impl != "naive")
        throw std::runtime_error("bench: impl must be waitfree or naive");
    if (cfg.duration_s < 0) throw std::runtime_error("bench: duration must be >= 0");

    NativeArena arena;
    Counter waitfree(arena, cfg.threads);
    NaiveCounter naive;

    std::atomic<bool> stop{false};
    std::atomic<int> started{0};
    std::vector<std::uint64_t> ops(static_cast<std::size_t>(cfg.threads), 0);
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(cfg.threads));

    bool use_waitfree = cfg.impl == "waitfree";
    for (int t = 0; t < cfg.threads; t++) {
        workers.emplace_back([&, t] {
            std::uint64_t local = 0;
            if (use_waitfree) {
                Counter::WriterHandle h = waitfree.register_writer();
                started.fetch_add(1);
                while (!stop.load(std::memory_order_relaxed)) {
                    h.fetch_and_add(1);
                    local++;
                }
            } else {
                started.fetch_add(1);
                while (!stop.load(std::memory_order_relaxed)) {
                    naive.fetch_and_add(1);
                    local++;
                }
            }
            ops[static_cast<std::size_t>(t)] = local;
        });
        if (cfg.pin_per_core) try_pin_to_core(workers.back(), t);
    }

    while (started.load() < cfg.threads) std::this_thread::yield();
    auto begin = std::chrono::steady_clock::now();
    std::this_thread::sleep_for(std::chrono::duration<double>(cfg.duration_s));
    stop.store(true);
    for (auto& w : workers) w.join();
    auto end = std::chrono::steady_clock::now();

    BenchResult r;
    r.impl = cfg.impl;
    r.threads = cfg.threads;
    r.elapsed_s = std::chrono::duration<double>(end - begin).count();
    r.per_thread_ops = ops;
    for (std::uint64_t o : ops) r.total_ops += o;
    r.ns_per_op = r.total_ops == 0 ? 0.0 : r.elapsed_s * 1e9 / static_cast<double>(r.total_ops);

    std::int64_t final_value = use_waitfree ? waitfree.read() : naive.read();
    if (final_value != static_cast<std::int64_t>(r.total_ops))
        throw std::runtime_error("bench: conservation check failed: counter=" +
                                 std::to_string(final_value) +
                                 " summed ops=" + std::to_string(r.total_ops));
    return r;
}

void emit_csv(const std::vector<BenchResult>& results, const std::string& path) {
    if (results.empty()) throw std::runtime_error("emit_csv: no results to write: " + path);
    std::ostringstream body;
    body << "impl,threads,seconds,total_ops,ns_per_op\n";
    for (const BenchResult& r : results) {
        char ns[64];
        std::snprintf(ns, sizeof(ns), "%.1f", r.ns_per_op);
        char secs[64];
        std::snprintf(secs, sizeof(secs), "%.3f", r.elapsed_s);
        body << r.impl << ',' << r.threads << ',' << secs << ',' << r.total_ops << ',' << ns << '\n';
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("emit_csv: cannot open for writing: " + path);
    out << body.str();
    if (!out.flush()) throw std::runtime_error("emit_csv: write failed: " + path);
}

}  // namespace wfa::bench
