#include "wfa/native_arena.hpp"

#include <stdexcept>

namespace wfa {

NativeArena::Slot* NativeArena::slot(RegisterId r) {
    if (r.idx >= count_.load(std::memory_order_acquire))
        throw std::out_of_range("NativeArena: unknown RegisterId");
    return &chunks_[r.idx >> kChunkBits]->slots[r.idx & (kChunkSize - 1)];
}

RegisterId NativeArena::alloc(const RegisterValue& initial) {
    std::lock_guard<std::mutex> lk(alloc_mu_);
    std::size_t idx = count_.load(std::memory_order_relaxed);
    if ((idx >> kChunkBits) >= chunks_.size()) {
        if (chunks_.size() == kMaxChunks) throw std::length_error("NativeArena: register capacity exhausted");
        chunks_.push_back(std::make_unique<Chunk>());
    }
    chunks_[idx >> kChunkBits]->slots[idx & (kChunkSize - 1)] =
        std::make_shared<const RegisterValue>(initial);
    count_.store(idx + 1, std::memory_order_release);
    return RegisterId{idx};
}

RegisterValue NativeArena::rd(RegisterId r) {
    return *std::atomic_load(slot(r));
}

void NativeArena::wr(RegisterId r, const RegisterValue& v) {
    std::atomic_store(slot(r), std::make_shared<const RegisterValue>(v));
}

bool NativeArena::cas(RegisterId r, const RegisterValue& expected, const RegisterValue& desired) {
    Slot* s = slot(r);
    Slot cur = std::atomic_load(s);
    if (*cur != expected) return false;
    return std::atomic_compare_exchange_strong(s, &cur, std::make_shared<const RegisterValue>(desired));
}

}  // namespace wfa
