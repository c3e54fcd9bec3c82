#include "wfa/sched.hpp"

#include <ucontext.h>

#include <algorithm>
#include <exception>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wfa {

namespace {

constexpr std::size_t kFiberStackSize = 256 * 1024;

// Cooperative fiber scheduler over ucontext. A single OS thread multiplexes
// the logical threads; resuming a fiber lets it perform exactly one register
// action and then run ahead to its next action request (or termination).
class FiberRunner : public ActionGate {
public:
    struct Decision {
        int chosen;
        std::vector<int> ready;
    };

    FiberRunner(InstrumentedArena& arena, SchedProgram& prog) : arena_(arena), prog_(prog) {
        threads_.resize(static_cast<std::size_t>(prog.thread_count()));
        arena_.set_gate(this);
    }

    ~FiberRunner() override { arena_.set_gate(nullptr); }

    void before_action(int tid) override {
        Thread& t = threads_.at(static_cast<std::size_t>(tid));
        swapcontext(&t.ctx, &main_ctx_);  // park until scheduled
    }

    void run(const std::function<int(const std::vector<int>&)>& choose) {
        for (int tid = 0; tid < prog_.thread_count(); tid++) start_fiber(tid);
        std::vector<int> ready;
        while (true) {
            ready.clear();
            for (int tid = 0; tid < prog_.thread_count(); tid++)
                if (!threads_[static_cast<std::size_t>(tid)].done) ready.push_back(tid);
            if (ready.empty()) break;
            int chosen = choose(ready);
            decisions.push_back(Decision{chosen, ready});
            resume(chosen);
        }
        arena_.set_gate(nullptr);
        arena_.set_current_tid(-1);
        if (failure_) std::rethrow_exception(failure_);
    }

    std::vector<Decision> decisions;

private:
    struct Thread {
        ucontext_t ctx{};
        std::unique_ptr<char[]> stack;
        bool done = false;
    };

    static void fiber_entry();

    void start_fiber(int tid) {
        Thread& t = threads_[static_cast<std::size_t>(tid)];
        t.stack = std::make_unique<char[]>(kFiberStackSize);
        getcontext(&t.ctx);
        t.ctx.uc_stack.ss_sp = t.stack.get();
        t.ctx.uc_stack.ss_size = kFiberStackSize;
        t.ctx.uc_link = &main_ctx_;
        entry_tid_ = tid;
        makecontext(&t.ctx, reinterpret_cast<void (*)()>(&FiberRunner::fiber_entry), 0);
        resume(tid);  // runs to its first action request without acting
    }

    void resume(int tid) {
        Thread& t = threads_[static_cast<std::size_t>(tid)];
        arena_.set_current_tid(tid);
        current_ = this;
        swapcontext(&main_ctx_, &t.ctx);
    }

    InstrumentedArena& arena_;
    SchedProgram& prog_;
    ucontext_t main_ctx_{};
    std::vector<Thread> threads_;
    std::exception_ptr failure_;
    int entry_tid_ = -1;

    static thread_local FiberRunner* current_;

    friend void run_fiber_body(FiberRunner*, int);
};

thread_local FiberRunner* FiberRunner::current_ = nullptr;

void FiberRunner::fiber_entry() {
    FiberRunner* r = FiberRunner::current_;
    int tid = r->entry_tid_;
    try {
        r->prog_.thread_body(tid);
    } catch (...) {
        if (!r->failure_) r->failure_ = std::current_exception();
    }
    r->threads_[static_cast<std::size_t>(tid)].done = true;
    swapcontext(&r->threads_[static_cast<std::size_t>(tid)].ctx, &r->main_ctx_);
}

void run_one(const ProgramFactory& factory, const std::function<int(const std::vector<int>&)>& choose,
             const std::function<void(const ScheduleOutcome&)>& visit,
             std::vector<FiberRunner::Decision>* decisions_out) {
    InstrumentedArena arena;
    arena.set_current_tid(-1);
    auto prog = factory(arena);
    FiberRunner runner(arena, *prog);
    runner.run(choose);
    if (decisions_out) *decisions_out = runner.decisions;
    if (visit) {
        ScheduleOutcome out;
        out.schedule.reserve(runner.decisions.size());
        for (const auto& d : runner.decisions) out.schedule.push_back(d.chosen);
        out.terminal = prog->terminal_state();
        out.arena = &arena;
        out.program = prog.get();
        visit(out);
    }
}

}  // namespace

ExploreStats sched_explore(const ProgramFactory& factory, std::uint64_t budget,
                           const std::function<void(const ScheduleOutcome&)>& visit) {
    ExploreStats stats;
    std::vector<int> prefix;
    while (true) {
        std::vector<FiberRunner::Decision> decisions;
        std::size_t di = 0;
        run_one(
            factory,
            [&](const std::vector<int>& ready) {
                int c = di < prefix.size() ? prefix[di] : ready.front();
                di++;
                return c;
            },
            visit, &decisions);
        stats.schedules++;

        // Backtrack to the deepest decision with an untried alternative.
        std::ptrdiff_t back = -1;
        int next = -1;
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(decisions.size()) - 1; i >= 0; i--) {
            const auto& d = decisions[static_cast<std::size_t>(i)];
            auto it = std::upper_bound(d.ready.begin(), d.ready.end(), d.chosen);
            if (it != d.ready.end()) {
                back = i;
                next = *it;
                break;
            }
        }
        if (back < 0) {
            stats.complete = true;
            break;
        }
        if (stats.schedules >= budget) break;  // partial coverage
        prefix.clear();
        for (std::ptrdiff_t i = 0; i < back; i++)
            prefix.push_back(decisions[static_cast<std::size_t>(i)].chosen);
        prefix.push_back(next);
    }
    return stats;
}

void run_schedule(const ProgramFactory& factory, const std::vector<int>& prefix,
                  const std::function<void(const ScheduleOutcome&)>& visit) {
    std::size_t di = 0;
    run_one(
        factory,
        [&](const std::vector<int>& ready) {
            int c = -1;
            if (di < prefix.size() &&
                std::binary_search(ready.begin(), ready.end(), prefix[di]))
                c = prefix[di];
            else
                c = ready.front();
            di++;
            return c;
        },
        visit, nullptr);
}

ExploreStats sched_sample(const ProgramFactory& factory, std::uint64_t count, std::uint64_t seed,
                          const std::function<void(const ScheduleOutcome&)>& visit) {
    ExploreStats stats;
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < count; i++) {
        run_one(
            factory,
            [&](const std::vector<int>& ready) {
                return ready[static_cast<std::size_t>(rng() % ready.size())];
            },
            visit, nullptr);
        stats.schedules++;
    }
    return stats;
}

std::string format_schedule(const std::vector<int>& schedule) {
    std::ostringstream os;
    for (std::size_t i = 0; i < schedule.size(); i++) os << (i ? "," : "") << schedule[i];
    return os.str();
}

std::vector<int> parse_schedule(const std::string& csv) {
    std::vector<int> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

}  // namespace wfa
