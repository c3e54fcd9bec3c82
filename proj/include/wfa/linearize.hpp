#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wfa/seqspec.hpp"
#include "wfa/trace.hpp"

namespace wfa::linearize {

// One completed or pending operation extracted from a trace.
struct Operation {
    std::uint64_t op_id = 0;
    int thread = 0;
    std::string name;
    std::vector<std::int64_t> args;
    std::vector<std::int64_t> result;
    std::uint64_t invoke_seq = 0;
    std::uint64_t response_seq = 0;
    bool completed = false;
};

struct ConcurrentHistory {
    std::vector<Operation> ops;

    // Collects the ops whose names appear in `public_names` (empty = all),
    // pairing invokes with responses by op id.
    static ConcurrentHistory from_log(const TraceLog& log,
                                      const std::vector<std::string>& public_names = {});

    // Line-oriented dump: `step thread op_id kind op_name nargs a... nres r...`
    std::string dump() const;
    static ConcurrentHistory parse(const std::string& text);
};

// Sequential oracle the checker replays candidate orders through.
class Oracle {
public:
    virtual ~Oracle() = default;
    virtual std::unique_ptr<Oracle> clone() const = 0;
    // Canonical state encoding for memoization; equal keys must imply
    // equivalent future behaviour.
    virtual std::string state_key() const = 0;
    // Applies the operation; returns false when the recorded result is
    // impossible in this state.
    virtual bool apply(const Operation& op) = 0;
};

struct Verdict {
    bool linearizable = false;
    bool too_large = false;  // history exceeded the size cap; not a verdict
    std::vector<std::uint64_t> witness;       // op ids in serialization order
    std::vector<Operation> counterexample;    // minimal failing prefix
};

// Exhaustive search (DFS with memoized oracle states) for a total order
// extending real-time order under which the oracle reproduces every result.
// Pending operations may be serialized or dropped. Histories larger than
// `size_cap` yield an explicit too_large verdict.
Verdict check(const ConcurrentHistory& history, const Oracle& initial, std::size_t size_cap = 12);

// --- Oracles for the objects in this library ---

// Exact-match oracle over SeqHistory. Ops: "get_current" -> [v, value];
// "get" [v] -> [found, value]; "publish" [p, v, value] -> [ok].
class HistoryOracle final : public Oracle {
public:
    HistoryOracle(std::int64_t capacity, std::int64_t initial) : seq_(capacity, initial) {}
    std::unique_ptr<Oracle> clone() const override { return std::make_unique<HistoryOracle>(*this); }
    std::string state_key() const override;
    bool apply(const Operation& op) override;

private:
    seqspec::SeqHistory seq_;
};

// Oracle over SeqWFArray. Version values returned by the implementation are
// checked against the version-function contract (nondecreasing; strictly
// larger than any earlier read's version) instead of exact equality with
// the reference counter. Ops: "write_and_f" [i, value] -> [n, v, agg];
// "get_last" [i] -> [n, v, agg]; "read" -> [v, agg].
class WFAOracle final : public Oracle {
public:
    WFAOracle(seqspec::Fold f, std::vector<std::int64_t> initial)
        : seq_(f, initial), slot_version_(initial.size(), 0) {}
    std::unique_ptr<Oracle> clone() const override { return std::make_unique<WFAOracle>(*this); }
    std::string state_key() const override;
    bool apply(const Operation& op) override;

private:
    seqspec::SeqWFArray seq_;
    std::vector<std::int64_t> slot_version_;  // implementation version of each slot's last write
    std::int64_t last_version_ = 0;
    std::int64_t last_read_version_ = 0;
};

// Exact-match oracle over SeqFAA. Ops: "faa" [x] -> [r]; "read" -> [v].
class FAAOracle final : public Oracle {
public:
    std::unique_ptr<Oracle> clone() const override { return std::make_unique<FAAOracle>(*this); }
    std::string state_key() const override;
    bool apply(const Operation& op) override;

private:
    seqspec::SeqFAA seq_;
};

}  // namespace wfa::linearize
