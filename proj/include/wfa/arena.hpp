#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "wfa/register_value.hpp"

namespace wfa {

// Opaque handle to one register inside an arena.
struct RegisterId {
    std::size_t idx = static_cast<std::size_t>(-1);

    friend bool operator==(RegisterId a, RegisterId b) { return a.idx == b.idx; }
    friend bool operator!=(RegisterId a, RegisterId b) { return !(a == b); }
};

// Uniform atomic-register interface: read / write / compare-and-swap over
// immutable bounded records. Two backends implement it: NativeArena (hardware
// atomics, real threads) and InstrumentedArena (deterministic scheduler,
// step accounting, event log). Structures built on top only see this surface.
class Arena {
public:
    virtual ~Arena() = default;

    virtual RegisterId alloc(const RegisterValue& initial) = 0;
    virtual RegisterValue rd(RegisterId r) = 0;
    virtual void wr(RegisterId r, const RegisterValue& v) = 0;
    // Atomically: if the current value structurally equals `expected`,
    // replace it with `desired` and return true; otherwise return false.
    virtual bool cas(RegisterId r, const RegisterValue& expected, const RegisterValue& desired) = 0;

    // Number of registers ever allocated (services memory-complexity checks).
    virtual std::size_t allocation_count() const = 0;

    static constexpr std::uint64_t kNoOp = static_cast<std::uint64_t>(-1);

    // Operation-trace hooks. The instrumented backend records these into its
    // event log; the native backend ignores them.
    virtual std::uint64_t op_invoke(std::string_view /*name*/, std::span<const std::int64_t> /*args*/) {
        return kNoOp;
    }
    virtual void op_response(std::uint64_t /*op_id*/, std::span<const std::int64_t> /*result*/) {}
};

}  // namespace wfa
