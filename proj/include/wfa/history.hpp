#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "wfa/arena.hpp"

namespace wfa {

// Register roles of one history object, for trace analysis.
struct HistoryLayout {
    int tag = 0;
    std::int64_t capacity = 0;
    int publishers = 0;
    RegisterId head;                 // (v, p) of the most recent publish
    std::vector<RegisterId> slots;   // circular buffer of (v, payload)
    std::vector<RegisterId> staging; // per-publisher (v, payload)
};

// Wait-free bounded-history versioned cell. Retains the last `capacity`
// published payloads; publish(v) succeeds only when v is exactly one past
// the current version. All operations take a constant number of register
// actions. Payloads are fixed-width int64 tuples.
//
// publish with the same publisher index must not run concurrently with
// itself; publisher exclusivity is asserted at runtime.
class HistoryObject {
public:
    using Payload = RegisterValue;

    HistoryObject(Arena& arena, std::int64_t capacity, int publishers,
                  const Payload& initial, const Payload& bottom, int trace_tag = 0);

    // (version, payload) of a publish that was current at some instant
    // within the call.
    std::pair<std::int64_t, Payload> get_current();

    // Payload published with version v if still retained; nullopt when v is
    // unpublished or evicted. Negative v always yields nullopt.
    std::optional<Payload> get(std::int64_t v);

    bool publish(int p, std::int64_t v, const Payload& value);

    // Copies the most recently published value into its slot if missing.
    void help();

    const HistoryLayout& layout() const { return layout_; }
    std::int64_t capacity() const { return layout_.capacity; }
    int width() const { return width_; }

private:
    Payload slot_record(std::int64_t v, const Payload& payload) const;

    Arena& arena_;
    HistoryLayout layout_;
    int width_;
    std::unique_ptr<std::atomic<bool>[]> publisher_busy_;
};

}  // namespace wfa
