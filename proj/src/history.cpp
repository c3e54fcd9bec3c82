#include "wfa/history.hpp"

#include <stdexcept>

namespace wfa {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

HistoryObject::Payload HistoryObject::slot_record(std::int64_t v, const Payload& payload) const {
    Payload rec{v};
    for (int i = 0; i < width_; i++) rec.push_back(payload[i]);
    return rec;
}

HistoryObject::HistoryObject(Arena& arena, std::int64_t capacity, int publishers,
                             const Payload& initial, const Payload& bottom, int trace_tag)
    : arena_(arena), width_(initial.size()) {
    if (capacity < 1) throw std::invalid_argument("HistoryObject: capacity must be >= 1");
    if (publishers < 1) throw std::invalid_argument("HistoryObject: publishers must be >= 1");
    if (bottom.size() != width_) throw std::invalid_argument("HistoryObject: bottom width mismatch");

    layout_.tag = trace_tag;
    layout_.capacity = capacity;
    layout_.publishers = publishers;
    layout_.head = arena_.alloc(Payload{0, 0});
    // Slot i starts at version i - capacity (except slot 0, which holds the
    // initial payload at version 0) so v = i (mod capacity) holds from the
    // start and sentinel versions are negative, hence unobservable.
    layout_.slots.reserve(static_cast<std::size_t>(capacity));
    for (std::int64_t i = 0; i < capacity; i++) {
        layout_.slots.push_back(
            arena_.alloc(i == 0 ? slot_record(0, initial) : slot_record(i - capacity, bottom)));
    }
    layout_.staging.reserve(static_cast<std::size_t>(publishers));
    for (int p = 0; p < publishers; p++)
        layout_.staging.push_back(arena_.alloc(slot_record(-1, bottom)));
    publisher_busy_ = std::make_unique<std::atomic<bool>[]>(static_cast<std::size_t>(publishers));
    for (int p = 0; p < publishers; p++) publisher_busy_[static_cast<std::size_t>(p)] = false;
}

void HistoryObject::help() {
    const std::int64_t tag_arg[] = {layout_.tag};
    std::uint64_t op = arena_.op_invoke("hist.help", tag_arg);
    RegisterValue s = arena_.rd(layout_.head);
    RegisterValue l = arena_.rd(layout_.staging[static_cast<std::size_t>(s[1])]);
    std::size_t slot_idx = static_cast<std::size_t>(floor_mod(s[0], layout_.capacity));
    RegisterValue h = arena_.rd(layout_.slots[slot_idx]);
    if (l[0] == s[0] && h[0] < s[0]) arena_.cas(layout_.slots[slot_idx], h, l);
    arena_.op_response(op, {});
}

std::pair<std::int64_t, HistoryObject::Payload> HistoryObject::get_current() {
    RegisterValue s = arena_.rd(layout_.head);
    help();
    std::size_t slot_idx = static_cast<std::size_t>(floor_mod(s[0], layout_.capacity));
    RegisterValue h = arena_.rd(layout_.slots[slot_idx]);
    Payload payload;
    for (int i = 0; i < width_; i++) payload.push_back(h[i + 1]);
    return {h[0], payload};
}

std::optional<HistoryObject::Payload> HistoryObject::get(std::int64_t v) {
    if (v < 0) return std::nullopt;  // sentinel versions stay hidden
    RegisterValue s = arena_.rd(layout_.head);
    if (s[0] < v) return std::nullopt;  // not published yet
    help();
    std::size_t slot_idx = static_cast<std::size_t>(floor_mod(v, layout_.capacity));
    RegisterValue h = arena_.rd(layout_.slots[slot_idx]);
    if (h[0] != v) return std::nullopt;  // evicted
    Payload payload;
    for (int i = 0; i < width_; i++) payload.push_back(h[i + 1]);
    return payload;
}

bool HistoryObject::publish(int p, std::int64_t v, const Payload& value) {
    if (p < 0 || p >= layout_.publishers) throw std::out_of_range("HistoryObject: publisher index");
    if (value.size() != width_) throw std::invalid_argument("HistoryObject: payload width mismatch");
    if (publisher_busy_[static_cast<std::size_t>(p)].exchange(true))
        throw std::logic_error("HistoryObject: concurrent publish with the same publisher index");
    struct Release {
        std::atomic<bool>& flag;
        ~Release() { flag = false; }
    } release{publisher_busy_[static_cast<std::size_t>(p)]};

    RegisterValue s = arena_.rd(layout_.head);
    if (v != s[0] + 1) return false;
    help();
    arena_.wr(layout_.staging[static_cast<std::size_t>(p)], slot_record(v, value));
    return arena_.cas(layout_.head, s, Payload{v, p});
}

}  // namespace wfa
