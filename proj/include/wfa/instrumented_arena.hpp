#pragma once

#include <cstdint>
#include <vector>

#include "wfa/arena.hpp"
#include "wfa/trace.hpp"

namespace wfa {

// Hook the scheduler installs so that every register action becomes a
// scheduling point.
class ActionGate {
public:
    virtual ~ActionGate() = default;
    // Called by the arena before each register action; blocks the calling
    // logical thread until the scheduler grants it the next step.
    virtual void before_action(int tid) = 0;
};

// Deterministic single-real-thread register backend: every action is logged
// with a global step index, and when a scheduler is attached every action is
// a yield point for interleaving exploration. Also usable standalone (no
// scheduler) for sequential step counting and replay-style tests.
class InstrumentedArena final : public Arena {
public:
    RegisterId alloc(const RegisterValue& initial) override;
    RegisterValue rd(RegisterId r) override;
    void wr(RegisterId r, const RegisterValue& v) override;
    bool cas(RegisterId r, const RegisterValue& expected, const RegisterValue& desired) override;

    std::size_t allocation_count() const override { return regs_.size(); }

    std::uint64_t op_invoke(std::string_view name, std::span<const std::int64_t> args) override;
    void op_response(std::uint64_t op_id, std::span<const std::int64_t> result) override;

    // Register actions performed so far (alloc excluded).
    std::uint64_t steps() const { return step_; }
    std::uint64_t thread_steps(int tid) const;

    const TraceLog& log() const { return log_; }
    TraceLog& log() { return log_; }

    void set_gate(ActionGate* g) { gate_ = g; }
    void set_current_tid(int tid) { cur_tid_ = tid; }
    int current_tid() const { return cur_tid_; }

private:
    RegisterValue& reg(RegisterId r);
    void tick();
    void record(ActionKind kind, RegisterId r, const RegisterValue& value, const RegisterValue& expected);

    std::vector<RegisterValue> regs_;
    TraceLog log_;
    std::uint64_t seq_ = 0;
    std::uint64_t step_ = 0;
    std::uint64_t next_op_id_ = 0;
    std::vector<std::uint64_t> per_thread_steps_;
    ActionGate* gate_ = nullptr;
    int cur_tid_ = 0;
};

}  // namespace wfa
