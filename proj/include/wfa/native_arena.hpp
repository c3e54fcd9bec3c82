#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <vector>

#include "wfa/arena.hpp"

namespace wfa {

// Register backend over hardware atomics. Values wider than a machine word
// are held behind shared_ptr indirection to immutable records; the handle is
// swapped with a single CAS and reclamation is by reference counting.
// cas() pre-checks structural equality of the current record, then swaps the
// handle; CASed record types all embed a monotone version field, so a given
// content is never re-installed and the handle check cannot spuriously fail
// on matching content.
class NativeArena final : public Arena {
public:
    NativeArena() { chunks_.reserve(kMaxChunks); }

    RegisterId alloc(const RegisterValue& initial) override;
    RegisterValue rd(RegisterId r) override;
    void wr(RegisterId r, const RegisterValue& v) override;
    bool cas(RegisterId r, const RegisterValue& expected, const RegisterValue& desired) override;

    std::size_t allocation_count() const override { return count_.load(std::memory_order_acquire); }

private:
    using Slot = std::shared_ptr<const RegisterValue>;
    static constexpr std::size_t kChunkBits = 10;
    static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
    static constexpr std::size_t kMaxChunks = 1 << 16;

    struct Chunk {
        Slot slots[kChunkSize];
    };

    Slot* slot(RegisterId r);

    // chunks_ is reserved up front so concurrent readers never see a
    // reallocation; only alloc() appends, under alloc_mu_.
    std::vector<std::unique_ptr<Chunk>> chunks_;
    std::mutex alloc_mu_;
    std::atomic<std::size_t> count_{0};
};

}  // namespace wfa
