#pragma once

// Concurrent programs shared by the scheduler-based tests. Each program
// records its public operations into the arena's op log so the traces can be
// fed to the linearizability checker and the lemma checks.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wfa/faa.hpp"
#include "wfa/history.hpp"
#include "wfa/linearize.hpp"
#include "wfa/sched.hpp"
#include "wfa/wfarray.hpp"

namespace wfa::testsupport {

inline const std::vector<std::string> kHistoryOps{"get_current", "get", "publish"};
inline const std::vector<std::string> kWFAOps{"write_and_f", "read", "get_last"};
inline const std::vector<std::string> kFAAOps{"faa", "read"};

inline std::uint64_t invoke(Arena& a, std::string_view name,
                            std::initializer_list<std::int64_t> args) {
    return a.op_invoke(name, std::span<const std::int64_t>(args.begin(), args.size()));
}

inline void respond(Arena& a, std::uint64_t op,
                    std::initializer_list<std::int64_t> result) {
    a.op_response(op, std::span<const std::int64_t>(result.begin(), result.size()));
}

// `publishers` threads each run `rounds` of get_current + publish(current+1);
// one extra reader thread does a get_current and a get(1). Payload width 1.
struct HistoryProgram : SchedProgram {
    InstrumentedArena& arena;
    HistoryObject hist;
    int publishers, rounds;

    HistoryProgram(InstrumentedArena& a, std::int64_t capacity, int publishers, int rounds)
        : arena(a),
          hist(a, capacity, publishers, RegisterValue{100}, RegisterValue{0}),
          publishers(publishers),
          rounds(rounds) {}

    int thread_count() const override { return publishers + 1; }

    std::pair<std::int64_t, std::int64_t> get_current() {
        std::uint64_t op = invoke(arena, "get_current", {});
        auto [v, payload] = hist.get_current();
        respond(arena, op, {v, payload[0]});
        return {v, payload[0]};
    }

    void get(std::int64_t v) {
        std::uint64_t op = invoke(arena, "get", {v});
        auto x = hist.get(v);
        respond(arena, op, {x ? 1 : 0, x ? (*x)[0] : 0});
    }

    void publish(int p, std::int64_t v, std::int64_t value) {
        std::uint64_t op = invoke(arena, "publish", {p, v, value});
        bool ok = hist.publish(p, v, RegisterValue{value});
        respond(arena, op, {ok ? 1 : 0});
    }

    void thread_body(int tid) override {
        if (tid < publishers) {
            for (int k = 0; k < rounds; k++) {
                auto [v, payload] = get_current();
                (void)payload;
                publish(tid, v + 1, 200 + tid * 10 + k);
            }
        } else {
            get_current();
            get(1);
        }
    }
};

// `writers` threads each run `rounds` write_and_f calls on their own slot;
// an optional reader thread does a read and a get_last(0).
struct WFAProgram : SchedProgram {
    InstrumentedArena& arena;
    WFArray array;
    int writers, rounds;
    bool with_reader;

    WFAProgram(InstrumentedArena& a, Fold f, const std::vector<std::int64_t>& initial,
               int writers, int rounds, bool with_reader)
        : arena(a),
          array(a, f, initial),
          writers(writers),
          rounds(rounds),
          with_reader(with_reader) {}

    int thread_count() const override { return writers + (with_reader ? 1 : 0); }

    void write(int i, std::int64_t value) {
        std::uint64_t op = invoke(arena, "write_and_f", {i, value});
        WFATriple t = array.write_and_f(i, value);
        respond(arena, op, {t.n, t.v, t.agg});
    }

    void read() {
        std::uint64_t op = invoke(arena, "read", {});
        auto [v, agg] = array.read();
        respond(arena, op, {v, agg});
    }

    void get_last(int i) {
        std::uint64_t op = invoke(arena, "get_last", {i});
        WFATriple t = array.get_last(i);
        respond(arena, op, {t.n, t.v, t.agg});
    }

    void thread_body(int tid) override {
        if (tid < writers) {
            for (int k = 0; k < rounds; k++) write(tid, (tid + 1) * 100 + k);
        } else {
            read();
            get_last(0);
        }
    }
};

// `adders` threads each run `rounds` fetch_and_add(tid + 1) calls; an
// optional reader thread reads once.
struct FAAProgram : SchedProgram {
    InstrumentedArena& arena;
    Counter counter;
    std::vector<Counter::WriterHandle> handles;
    int adders, rounds;
    bool with_reader;

    FAAProgram(InstrumentedArena& a, int capacity, int adders, int rounds, bool with_reader)
        : arena(a), counter(a, capacity), adders(adders), rounds(rounds), with_reader(with_reader) {
        for (int i = 0; i < adders; i++) handles.push_back(counter.register_writer());
    }

    int thread_count() const override { return adders + (with_reader ? 1 : 0); }

    void thread_body(int tid) override {
        if (tid < adders) {
            for (int k = 0; k < rounds; k++) {
                std::int64_t x = tid + 1;
                std::uint64_t op = invoke(arena, "faa", {x});
                std::int64_t r = handles[static_cast<std::size_t>(tid)].fetch_and_add(x);
                respond(arena, op, {r});
            }
        } else {
            std::uint64_t op = invoke(arena, "read", {});
            std::int64_t v = counter.read();
            respond(arena, op, {v});
        }
    }
};

inline std::int64_t fold_add(std::int64_t a, std::int64_t b) { return a + b; }
inline std::int64_t fold_max(std::int64_t a, std::int64_t b) { return a > b ? a : b; }

}  // namespace wfa::testsupport
