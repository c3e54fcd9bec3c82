#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "wfa/wfarray.hpp"

namespace wfa {

// Wait-free fetch-and-add counter for up to `capacity` writer threads:
// a write-and-f-array of that size with integer addition, one array slot
// per registered writer. read() is O(1); fetch_and_add is polylogarithmic
// in the capacity.
class Counter {
public:
    Counter(Arena& arena, int capacity)
        : capacity_(capacity),
          array_(arena, [](std::int64_t a, std::int64_t b) { return a + b; },
                 std::vector<std::int64_t>(static_cast<std::size_t>(check_capacity(capacity)), 0)) {}

    // Exclusive handle over one slot. The slot's running sum is cached
    // locally; the single-writer rule keeps the cache exact.
    class WriterHandle {
    public:
        // Returns the counter value immediately before this addition.
        std::int64_t fetch_and_add(std::int64_t x) {
            local_sum_ += x;
            WFATriple t = writer_.write_and_f(local_sum_);
            // t.agg is the total just after this addition; addition is
            // invertible, so the pre-value is recovered by subtracting x.
            return t.agg - x;
        }

        int slot() const { return writer_.slot(); }

    private:
        friend class Counter;
        explicit WriterHandle(WFArray::Writer writer) : writer_(writer) {}
        WFArray::Writer writer_;
        std::int64_t local_sum_ = 0;
    };

    WriterHandle register_writer() {
        int slot = next_slot_.fetch_add(1);
        if (slot >= capacity_) {
            next_slot_.fetch_sub(1);
            throw std::length_error("Counter: writer capacity exhausted");
        }
        return WriterHandle(array_.acquire_writer(slot));
    }

    std::int64_t read() { return array_.read().second; }

    int capacity() const { return capacity_; }
    WFArray& array() { return array_; }

private:
    static int check_capacity(int capacity) {
        if (capacity < 1) throw std::invalid_argument("Counter: capacity must be >= 1");
        return capacity;
    }

    int capacity_;
    WFArray array_;
    std::atomic<int> next_slot_{0};
};

}  // namespace wfa
