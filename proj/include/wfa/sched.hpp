#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wfa/instrumented_arena.hpp"

namespace wfa {

// A multi-threaded test program runnable under the deterministic scheduler.
// The factory builds all shared structures against a fresh arena; thread
// bodies then run as cooperative logical threads whose only yield points are
// register actions. Programs must be deterministic given a schedule.
class SchedProgram {
public:
    virtual ~SchedProgram() = default;
    virtual int thread_count() const = 0;
    virtual void thread_body(int tid) = 0;
    // Called after all threads terminated (scheduler detached); used to
    // collect reachable terminal states.
    virtual std::string terminal_state() { return {}; }
};

using ProgramFactory = std::function<std::unique_ptr<SchedProgram>(InstrumentedArena&)>;

struct ScheduleOutcome {
    std::vector<int> schedule;  // thread chosen at each register action
    std::string terminal;
    const InstrumentedArena* arena = nullptr;  // valid during the visit callback only
    SchedProgram* program = nullptr;           // likewise
};

struct ExploreStats {
    std::uint64_t schedules = 0;
    bool complete = false;  // false => budget exhausted, coverage is partial
};

// Depth-first enumeration of interleavings, lowest thread id first, up to
// `budget` complete schedules. Invokes `visit` once per schedule. When the
// budget runs out before the schedule space is exhausted, the result is
// explicitly flagged as partial.
ExploreStats sched_explore(const ProgramFactory& factory, std::uint64_t budget,
                           const std::function<void(const ScheduleOutcome&)>& visit);

// Runs a single schedule: follow `prefix` while it lasts, then lowest
// runnable thread id. Used for replaying failing schedules.
void run_schedule(const ProgramFactory& factory, const std::vector<int>& prefix,
                  const std::function<void(const ScheduleOutcome&)>& visit);

// Runs `count` schedules with uniformly random choices drawn from `seed`.
ExploreStats sched_sample(const ProgramFactory& factory, std::uint64_t count, std::uint64_t seed,
                          const std::function<void(const ScheduleOutcome&)>& visit);

// Schedule prefixes serialize as comma-separated thread ids.
std::string format_schedule(const std::vector<int>& schedule);
std::vector<int> parse_schedule(const std::string& csv);

}  // namespace wfa
