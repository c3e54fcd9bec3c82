#include "wfa/instrumented_arena.hpp"

#include <stdexcept>

namespace wfa {

RegisterValue& InstrumentedArena::reg(RegisterId r) {
    if (r.idx >= regs_.size()) throw std::out_of_range("InstrumentedArena: unknown RegisterId");
    return regs_[r.idx];
}

void InstrumentedArena::record(ActionKind kind, RegisterId r, const RegisterValue& value,
                               const RegisterValue& expected) {
    log_.reg_events.push_back(RegisterEvent{seq_++, step_, cur_tid_, kind, r, value, expected});
}

RegisterId InstrumentedArena::alloc(const RegisterValue& initial) {
    RegisterId id{regs_.size()};
    regs_.push_back(initial);
    record(ActionKind::Alloc, id, initial, RegisterValue{});
    return id;
}

void InstrumentedArena::tick() {
    if (gate_) gate_->before_action(cur_tid_);
    step_++;
    if (cur_tid_ >= 0) {
        if (per_thread_steps_.size() <= static_cast<std::size_t>(cur_tid_))
            per_thread_steps_.resize(static_cast<std::size_t>(cur_tid_) + 1, 0);
        per_thread_steps_[static_cast<std::size_t>(cur_tid_)]++;
    }
}

RegisterValue InstrumentedArena::rd(RegisterId r) {
    RegisterValue& cell = reg(r);
    tick();
    record(ActionKind::Rd, r, cell, RegisterValue{});
    return cell;
}

void InstrumentedArena::wr(RegisterId r, const RegisterValue& v) {
    RegisterValue& cell = reg(r);
    tick();
    cell = v;
    record(ActionKind::Wr, r, v, RegisterValue{});
}

bool InstrumentedArena::cas(RegisterId r, const RegisterValue& expected, const RegisterValue& desired) {
    RegisterValue& cell = reg(r);
    tick();
    bool ok = (cell == expected);
    if (ok) cell = desired;
    record(ok ? ActionKind::CasOk : ActionKind::CasFail, r, desired, expected);
    return ok;
}

std::uint64_t InstrumentedArena::thread_steps(int tid) const {
    if (tid < 0 || static_cast<std::size_t>(tid) >= per_thread_steps_.size()) return 0;
    return per_thread_steps_[static_cast<std::size_t>(tid)];
}

std::uint64_t InstrumentedArena::op_invoke(std::string_view name, std::span<const std::int64_t> args) {
    std::uint64_t id = next_op_id_++;
    log_.op_events.push_back(
        OpEvent{seq_++, cur_tid_, id, true, std::string(name), {args.begin(), args.end()}});
    return id;
}

void InstrumentedArena::op_response(std::uint64_t op_id, std::span<const std::int64_t> result) {
    // Find the matching invoke for the name; responses carry it too so the
    // log is self-contained line by line.
    std::string name;
    for (auto it = log_.op_events.rbegin(); it != log_.op_events.rend(); ++it) {
        if (it->op_id == op_id && it->invoke) {
            name = it->name;
            break;
        }
    }
    log_.op_events.push_back(
        OpEvent{seq_++, cur_tid_, op_id, false, std::move(name), {result.begin(), result.end()}});
}

}  // namespace wfa
