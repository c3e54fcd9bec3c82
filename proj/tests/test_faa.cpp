#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <thread>

#include "support.hpp"
#include "wfa/faa.hpp"
#include "wfa/linearize.hpp"
#include "wfa/native_arena.hpp"
#include "wfa/seqspec.hpp"

using namespace wfa;

TEST_CASE("single writer matches the reference counter") {
    std::mt19937_64 rng(31);
    NativeArena arena;
    Counter c(arena, 1);
    auto w = c.register_writer();
    seqspec::SeqFAA ref;
    for (int k = 0; k < 2000; k++) {
        std::int64_t x = static_cast<std::int64_t>(rng() % 100) - 50;
        CHECK(w.fetch_and_add(x) == ref.add(x));
        CHECK(c.read() == ref.read());
    }
}

TEST_CASE("writer registration is bounded by the capacity") {
    NativeArena arena;
    Counter c(arena, 2);
    auto w0 = c.register_writer();
    auto w1 = c.register_writer();
    CHECK(w0.slot() != w1.slot());
    CHECK_THROWS_AS(c.register_writer(), std::length_error);
    CHECK_THROWS(Counter(arena, 0));
}

TEST_CASE("fresh counter reads zero") {
    NativeArena arena;
    Counter c(arena, 4);
    CHECK(c.read() == 0);
}

TEST_CASE("concurrent increments conserve the total and never repeat a value") {
    constexpr int kThreads = 4;
    constexpr int kOps = 2000;
    NativeArena arena;
    Counter c(arena, kThreads);
    std::vector<std::vector<std::int64_t>> returns(kThreads);
    std::vector<std::thread> ts;
    for (int t = 0; t < kThreads; t++)
        ts.emplace_back([&, t] {
            auto w = c.register_writer();
            returns[static_cast<std::size_t>(t)].reserve(kOps);
            for (int k = 0; k < kOps; k++)
                returns[static_cast<std::size_t>(t)].push_back(w.fetch_and_add(1));
        });
    for (auto& t : ts) t.join();
    CHECK(c.read() == kThreads * kOps);

    // Each +1 returns the pre-value, so the union of returns must be exactly
    // {0, ..., total-1} with no duplicates.
    std::vector<std::int64_t> all;
    for (auto& r : returns) {
        CHECK(std::is_sorted(r.begin(), r.end()));  // per-writer returns increase
        all.insert(all.end(), r.begin(), r.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<std::int64_t> want(all.size());
    std::iota(want.begin(), want.end(), 0);
    CHECK(all == want);
}

TEST_CASE("a concurrent reader only ever sees nondecreasing sums") {
    NativeArena arena;
    Counter c(arena, 2);
    std::atomic<bool> stop{false};
    std::atomic<bool> monotone{true};
    std::thread reader([&] {
        std::int64_t prev = -1;
        while (!stop.load()) {
            std::int64_t v = c.read();
            if (v < prev) monotone = false;
            prev = v;
        }
    });
    std::vector<std::thread> writers;
    for (int t = 0; t < 2; t++)
        writers.emplace_back([&] {
            auto w = c.register_writer();
            for (int k = 0; k < 3000; k++) w.fetch_and_add(1);
        });
    for (auto& t : writers) t.join();
    stop = true;
    reader.join();
    CHECK(monotone.load());
    CHECK(c.read() == 6000);
}

TEST_CASE("explored interleavings are linearizable fetch-and-adds") {
    using namespace wfa::testsupport;
    std::uint64_t checked = 0;
    sched_explore(
        [](InstrumentedArena& a) { return std::make_unique<FAAProgram>(a, 2, 2, 1, true); }, 150,
        [&](const ScheduleOutcome& out) {
            auto hist = linearize::ConcurrentHistory::from_log(out.arena->log(), kFAAOps);
            linearize::FAAOracle oracle;
            auto verdict = linearize::check(hist, oracle);
            CHECK_FALSE(verdict.too_large);
            if (!verdict.linearizable) FAIL("schedule ", format_schedule(out.schedule), ":\n",
                                            hist.dump());
            checked++;
        });
    CHECK(checked > 0);
}
