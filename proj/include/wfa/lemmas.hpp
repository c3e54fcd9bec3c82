#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfa/history.hpp"
#include "wfa/linearize.hpp"
#include "wfa/trace.hpp"
#include "wfa/wfarray.hpp"

namespace wfa::lemmas {

struct Violation {
    std::uint64_t seq = 0;  // event sequence index where the predicate broke
    std::string what;
};

struct Report {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    void merge(Report other) {
        for (auto& v : other.violations) violations.push_back(std::move(v));
    }
    std::string to_string() const;
};

// Structural invariants of one history object over an instrumented trace:
// per-slot version monotonicity and residue, staged-value consistency with
// the head register, slot contents traceable to successful publishes, and
// the post-help slot freshness guarantee.
Report check_history_lemmas(const TraceLog& log, const HistoryLayout& layout);

// Tree-wide invariants of a write-and-f-array: the history checks at every
// internal node, child-version monotonicity across published node values,
// the two-failed-attempts rule, binary-search probe confinement, and the
// get-last count sandwich against the recorded public operations.
Report check_wfarray_lemmas(const TraceLog& log, const std::vector<WFANodeLayout>& nodes,
                            const linearize::ConcurrentHistory& public_ops);

}  // namespace wfa::lemmas
