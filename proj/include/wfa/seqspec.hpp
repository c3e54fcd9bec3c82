#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace wfa::seqspec {

// Single-threaded reference implementations. These are oracles: written for
// obviousness, not speed, and kept independent of the concurrent code paths
// they are used to check.

using Fold = std::int64_t (*)(std::int64_t, std::int64_t);

// Black-box version function: version(false) returns the current counter,
// version(true) increments first. Nondecreasing; strictly increasing across
// a false->true pair.
class VersionOracle {
public:
    std::int64_t version(bool bump) {
        if (bump) counter_++;
        return counter_;
    }
    std::int64_t current() const { return counter_; }

private:
    std::int64_t counter_ = 0;
};

// Versioned cell retaining the last `capacity` published values.
class SeqHistory {
public:
    SeqHistory(std::int64_t capacity, std::int64_t initial)
        : capacity_(capacity) {
        if (capacity < 1) throw std::invalid_argument("SeqHistory: capacity must be >= 1");
        values_[0] = initial;
    }

    std::pair<std::int64_t, std::int64_t> get_current() const { return {current_, values_.at(current_)}; }

    std::optional<std::int64_t> get(std::int64_t v) const {
        if (v < 0 || v <= current_ - capacity_ || v > current_) return std::nullopt;
        return values_.at(v);
    }

    bool publish(std::int64_t v, std::int64_t value) {
        if (v != current_ + 1) return false;
        values_[v] = value;
        current_ = v;
        return true;
    }

    std::int64_t capacity() const { return capacity_; }
    std::int64_t current_version() const { return current_; }

private:
    std::int64_t capacity_;
    std::int64_t current_ = 0;
    std::map<std::int64_t, std::int64_t> values_;  // version -> payload, unbounded
};

struct Triple {
    std::int64_t n = 0;
    std::int64_t v = 0;
    std::int64_t agg = 0;

    friend bool operator==(const Triple&, const Triple&) = default;
};

// Array with atomic "write element i, return f over all elements".
class SeqWFArray {
public:
    SeqWFArray(Fold f, std::vector<std::int64_t> initial)
        : f_(f), values_(std::move(initial)) {
        if (values_.empty()) throw std::invalid_argument("SeqWFArray: size must be >= 1");
        std::int64_t agg = fold();
        last_.assign(values_.size(), Triple{0, 0, agg});
    }

    Triple write_and_f(std::size_t i, std::int64_t value) {
        check_index(i);
        values_[i] = value;
        Triple& t = last_[i];
        t.n++;
        t.v = version_.version(true);
        t.agg = fold();
        return t;
    }

    Triple get_last(std::size_t i) const {
        check_index(i);
        return last_[i];
    }

    std::pair<std::int64_t, std::int64_t> read() { return {version_.version(false), fold()}; }

    std::size_t size() const { return values_.size(); }

    std::int64_t fold() const {
        std::int64_t acc = values_[0];
        for (std::size_t i = 1; i < values_.size(); i++) acc = f_(acc, values_[i]);
        return acc;
    }

private:
    void check_index(std::size_t i) const {
        if (i >= values_.size()) throw std::out_of_range("SeqWFArray: index");
    }

    Fold f_;
    std::vector<std::int64_t> values_;
    std::vector<Triple> last_;
    VersionOracle version_;
};

class SeqFAA {
public:
    std::int64_t add(std::int64_t x) {
        std::int64_t r = value_;
        value_ += x;
        return r;
    }
    std::int64_t read() const { return value_; }

private:
    std::int64_t value_ = 0;
};

}  // namespace wfa::seqspec
