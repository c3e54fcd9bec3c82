#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfa/arena.hpp"
#include "wfa/register_value.hpp"

namespace wfa {

enum class ActionKind { Alloc, Rd, Wr, CasOk, CasFail };

// One register action under the instrumented backend. `seq` is the global
// event sequence number shared with op events; `step` counts register
// actions only (alloc is recorded but does not consume a step).
struct RegisterEvent {
    std::uint64_t seq;
    std::uint64_t step;
    int tid;
    ActionKind kind;
    RegisterId reg;
    RegisterValue value;     // rd: value read; wr/cas: value written/desired
    RegisterValue expected;  // cas only
};

// Invoke/response record for a (public or internal) operation.
struct OpEvent {
    std::uint64_t seq;
    int tid;
    std::uint64_t op_id;
    bool invoke;  // false => response
    std::string name;
    std::vector<std::int64_t> args;  // invoke: arguments; response: result
};

struct TraceLog {
    std::vector<RegisterEvent> reg_events;
    std::vector<OpEvent> op_events;

    void clear() {
        reg_events.clear();
        op_events.clear();
    }
};

}  // namespace wfa
