#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "wfa/arena.hpp"
#include "wfa/history.hpp"

namespace wfa {

using Fold = std::int64_t (*)(std::int64_t, std::int64_t);

struct WFATriple {
    std::int64_t n = 0;    // number of writes to this slot so far
    std::int64_t v = 0;    // version at the write's serialization point
    std::int64_t agg = 0;  // aggregate of the whole array at that point

    friend bool operator==(const WFATriple&, const WFATriple&) = default;
};

// Register roles of one tree node, for trace analysis.
struct WFANodeLayout {
    int id = 0;
    int size = 0;
    bool leaf = false;
    RegisterId leaf_state;           // leaf only: (v, value)
    HistoryLayout hist;              // internal only; payload [T0, T1, v0, v1]
    std::vector<RegisterId> last;    // internal only: per-slot (n, v, agg)
    int left = -1, right = -1;       // child node ids
};

// Wait-free array with the combined operation "write element i and return f
// folded over all elements", plus read and get-last. Built as a binary tree:
// each internal node aggregates its two children through a history object
// that retains enough versions for every in-flight writer to be helped.
//
// write_and_f for a fixed slot must not run concurrently with itself;
// distinct slots, read and get_last are fully concurrent.
class WFArray {
public:
    WFArray(Arena& arena, Fold f, std::span<const std::int64_t> initial);

    // Exclusive per-slot writer handle; each slot's handle can be acquired
    // exactly once.
    class Writer {
    public:
        WFATriple write_and_f(std::int64_t value) { return owner_->write_and_f(slot_, value); }
        int slot() const { return slot_; }

    private:
        friend class WFArray;
        Writer(WFArray* owner, int slot) : owner_(owner), slot_(slot) {}
        WFArray* owner_;
        int slot_;
    };

    Writer acquire_writer(int i);

    std::pair<std::int64_t, std::int64_t> read();  // (version, aggregate)
    WFATriple write_and_f(int i, std::int64_t value);
    WFATriple get_last(int i);

    int size() const { return size_; }
    std::vector<WFANodeLayout> layout() const;

private:
    struct Node {
        int id = 0;
        int size = 0;
        RegisterId leaf_state;
        std::unique_ptr<HistoryObject> hist;
        std::vector<RegisterId> last;
        std::unique_ptr<Node> child[2];

        bool leaf() const { return size == 1; }
        int half() const { return (size + 1) / 2; }  // ceil(size/2), the left child's size
    };

    std::unique_ptr<Node> build(std::span<const std::int64_t> initial, std::int64_t* agg_out);

    std::pair<std::int64_t, std::int64_t> read(Node& n);
    WFATriple write_and_f(Node& n, int i, std::int64_t value);
    WFATriple get_last(Node& n, int x);
    bool update(Node& n, int i, int attempt);
    void help(Node& n, int x);

    Arena& arena_;
    Fold f_;
    int size_;
    int next_node_id_ = 0;
    std::unique_ptr<Node> root_;
    std::unique_ptr<std::atomic<bool>[]> writer_busy_;
    std::unique_ptr<std::atomic<bool>[]> writer_taken_;
};

}  // namespace wfa
