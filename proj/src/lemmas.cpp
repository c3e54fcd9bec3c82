#include "wfa/lemmas.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace wfa::lemmas {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

struct Change {
    std::uint64_t seq;
    int tid;
    RegisterValue value;
};

// State-changing events (alloc, wr, successful cas) per register.
struct TraceIndex {
    std::map<std::size_t, std::vector<Change>> changes;

    explicit TraceIndex(const TraceLog& log) {
        for (const RegisterEvent& e : log.reg_events) {
            if (e.kind == ActionKind::Alloc || e.kind == ActionKind::Wr ||
                e.kind == ActionKind::CasOk)
                changes[e.reg.idx].push_back(Change{e.seq, e.tid, e.value});
        }
    }

    const std::vector<Change>& of(RegisterId r) const {
        static const std::vector<Change> empty;
        auto it = changes.find(r.idx);
        return it == changes.end() ? empty : it->second;
    }

    // Register contents after all changes with seq' <= seq.
    const RegisterValue* value_at(RegisterId r, std::uint64_t seq) const {
        const auto& cs = of(r);
        auto it = std::upper_bound(cs.begin(), cs.end(), seq,
                                   [](std::uint64_t s, const Change& c) { return s < c.seq; });
        if (it == cs.begin()) return nullptr;
        return &std::prev(it)->value;
    }
};

struct PublishRecord {
    std::uint64_t cas_seq;  // serialization point of the successful publish
    int tid;
    std::int64_t version;
    int publisher;
    RegisterValue staged;  // full staged record (v, payload...)
    bool staged_known = false;
};

// Successful head CASes in seq order, with the staged record the publishing
// thread wrote just before.
std::vector<PublishRecord> publishes_of(const TraceIndex& idx, const HistoryLayout& h) {
    std::vector<PublishRecord> out;
    for (const Change& c : idx.of(h.head)) {
        if (c.value.size() != 2) continue;
        PublishRecord pr;
        pr.cas_seq = c.seq;
        pr.tid = c.tid;
        pr.version = c.value[0];
        pr.publisher = static_cast<int>(c.value[1]);
        if (pr.version == 0) continue;  // initial head value, not a publish
        const auto& stage = idx.of(h.staging[static_cast<std::size_t>(pr.publisher)]);
        for (auto it = stage.rbegin(); it != stage.rend(); ++it) {
            if (it->seq < c.seq) {
                pr.staged = it->value;
                pr.staged_known = true;
                break;
            }
        }
        out.push_back(std::move(pr));
    }
    return out;
}

void check_slots(const TraceIndex& idx, const HistoryLayout& h, Report& report) {
    for (std::size_t i = 0; i < h.slots.size(); i++) {
        const auto& cs = idx.of(h.slots[i]);
        std::int64_t prev = std::numeric_limits<std::int64_t>::min();
        for (const Change& c : cs) {
            std::int64_t v = c.value[0];
            if (v < prev)
                report.violations.push_back(
                    {c.seq, "history slot " + std::to_string(i) + " version regressed"});
            if (floor_mod(v, h.capacity) != static_cast<std::int64_t>(i))
                report.violations.push_back(
                    {c.seq, "history slot " + std::to_string(i) + " residue broken"});
            prev = v;
        }
    }
}

void check_staging(const TraceIndex& idx, const HistoryLayout& h, Report& report) {
    for (std::size_t p = 0; p < h.staging.size(); p++) {
        const auto& cs = idx.of(h.staging[p]);
        std::int64_t prev = std::numeric_limits<std::int64_t>::min();
        for (std::size_t k = 1; k < cs.size(); k++) {  // skip the alloc sentinel
            std::int64_t v = cs[k].value[0];
            if (v <= prev)
                report.violations.push_back(
                    {cs[k].seq, "staging " + std::to_string(p) + " version not strictly increasing"});
            prev = v;
        }
    }
}

void check_head_vs_staging(const std::vector<PublishRecord>& pubs, const HistoryLayout& h,
                           Report& report) {
    std::int64_t prev = 0;
    for (const PublishRecord& pr : pubs) {
        if (pr.version != prev + 1)
            report.violations.push_back(
                {pr.cas_seq, "publish version not successor of previous head"});
        prev = pr.version;
        if (!pr.staged_known || pr.staged[0] != pr.version)
            report.violations.push_back(
                {pr.cas_seq, "successful publish without matching staged value"});
        (void)h;
    }
}

void check_slot_provenance(const TraceIndex& idx, const std::vector<PublishRecord>& pubs,
                           const HistoryLayout& h, Report& report) {
    std::map<std::int64_t, const PublishRecord*> by_version;
    for (const PublishRecord& pr : pubs) by_version[pr.version] = &pr;
    for (std::size_t i = 0; i < h.slots.size(); i++) {
        const auto& cs = idx.of(h.slots[i]);
        for (std::size_t k = 1; k < cs.size(); k++) {  // skip initialization
            std::int64_t v = cs[k].value[0];
            auto it = by_version.find(v);
            if (it == by_version.end() || it->second->cas_seq >= cs[k].seq) {
                report.violations.push_back(
                    {cs[k].seq, "slot value not traceable to an earlier successful publish"});
                continue;
            }
            if (it->second->staged_known && it->second->staged != cs[k].value)
                report.violations.push_back(
                    {cs[k].seq, "slot value differs from the published payload"});
        }
    }
}

void check_help_completeness(const TraceIndex& idx, const std::vector<PublishRecord>& pubs,
                             const TraceLog& log, const HistoryLayout& h, Report& report) {
    // For every fully-enclosed help over this history, each publish
    // serialized before it started must be reflected in its slot.
    struct Span {
        std::uint64_t invoke, response;
    };
    std::map<std::uint64_t, std::uint64_t> open;  // op_id -> invoke seq
    std::vector<Span> helps;
    for (const OpEvent& e : log.op_events) {
        if (e.name != "hist.help") continue;
        if (e.invoke) {
            if (!e.args.empty() && e.args[0] == h.tag) open[e.op_id] = e.seq;
        } else {
            auto it = open.find(e.op_id);
            if (it != open.end()) {
                helps.push_back(Span{it->second, e.seq});
                open.erase(it);
            }
        }
    }
    for (const Span& sp : helps) {
        for (const PublishRecord& pr : pubs) {
            if (pr.cas_seq >= sp.invoke) break;
            std::size_t slot = static_cast<std::size_t>(floor_mod(pr.version, h.capacity));
            const RegisterValue* cur = idx.value_at(h.slots[slot], sp.response);
            if (!cur || (*cur)[0] < pr.version)
                report.violations.push_back(
                    {sp.response, "slot stale after fully-enclosed help (v=" +
                                      std::to_string(pr.version) + ")"});
        }
    }
}

}  // namespace

Report check_history_lemmas(const TraceLog& log, const HistoryLayout& layout) {
    Report report;
    TraceIndex idx(log);
    auto pubs = publishes_of(idx, layout);
    check_slots(idx, layout, report);
    check_staging(idx, layout, report);
    check_head_vs_staging(pubs, layout, report);
    check_slot_provenance(idx, pubs, layout, report);
    check_help_completeness(idx, pubs, log, layout, report);
    return report;
}

namespace {

struct UpdateOp {
    std::uint64_t invoke_seq = 0, response_seq = 0;
    int tid = 0;
    std::int64_t node = 0, slot = 0, attempt = 0;
    bool ok = false;
    bool completed = false;
};

std::vector<UpdateOp> collect_updates(const TraceLog& log) {
    std::map<std::uint64_t, UpdateOp> open;
    std::vector<UpdateOp> out;
    for (const OpEvent& e : log.op_events) {
        if (e.name != "update") continue;
        if (e.invoke) {
            UpdateOp u;
            u.invoke_seq = e.seq;
            u.tid = e.tid;
            u.node = e.args.at(0);
            u.slot = e.args.at(1);
            u.attempt = e.args.at(2);
            open[e.op_id] = u;
        } else {
            auto it = open.find(e.op_id);
            if (it == open.end()) continue;
            it->second.response_seq = e.seq;
            it->second.ok = !e.args.empty() && e.args[0] == 1;
            it->second.completed = true;
            out.push_back(it->second);
            open.erase(it);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const UpdateOp& a, const UpdateOp& b) { return a.invoke_seq < b.invoke_seq; });
    return out;
}

void check_child_version_monotonicity(const std::vector<PublishRecord>& pubs,
                                      const WFANodeLayout& node, Report& report) {
    std::int64_t prev0 = std::numeric_limits<std::int64_t>::min();
    std::int64_t prev1 = prev0;
    for (const PublishRecord& pr : pubs) {
        if (!pr.staged_known || pr.staged.size() != 5) continue;
        std::int64_t v0 = pr.staged[3], v1 = pr.staged[4];  // staged = (v, T0, T1, v0, v1)
        if (v0 < prev0 || v1 < prev1)
            report.violations.push_back(
                {pr.cas_seq, "node " + std::to_string(node.id) + " child version regressed"});
        prev0 = v0;
        prev1 = v1;
    }
}

void check_two_attempts(const std::vector<UpdateOp>& updates,
                        const std::vector<PublishRecord>& pubs, const WFANodeLayout& node,
                        Report& report) {
    for (std::size_t k = 0; k < updates.size(); k++) {
        const UpdateOp& second = updates[k];
        if (second.node != node.id || second.attempt != 2) continue;
        if (second.ok) continue;
        // Find the matching first attempt: same thread, node and slot,
        // latest attempt-1 before this one.
        const UpdateOp* first = nullptr;
        for (std::size_t j = k; j-- > 0;) {
            const UpdateOp& u = updates[j];
            if (u.tid == second.tid && u.node == second.node && u.slot == second.slot &&
                u.attempt == 1) {
                first = &u;
                break;
            }
        }
        if (!first) {
            report.violations.push_back({second.invoke_seq, "second update attempt without a first"});
            continue;
        }
        bool interposed = std::any_of(pubs.begin(), pubs.end(), [&](const PublishRecord& pr) {
            return pr.tid != second.tid && pr.cas_seq > first->invoke_seq &&
                   pr.cas_seq < second.response_seq;
        });
        if (!interposed)
            report.violations.push_back(
                {second.response_seq,
                 "two failed updates at node " + std::to_string(node.id) +
                     " without an enclosed successful publish by another thread"});
    }
}

void check_probe_window(const TraceLog& log, const std::map<std::int64_t, const WFANodeLayout*>& nodes,
                        Report& report) {
    for (const OpEvent& e : log.op_events) {
        if (e.name != "probe" || !e.invoke) continue;
        std::int64_t node_id = e.args.at(0);
        std::int64_t v_current = e.args.at(2);
        std::int64_t probed = e.args.at(3);
        auto it = nodes.find(node_id);
        if (it == nodes.end()) continue;
        std::int64_t window = it->second->size + 1;
        if (probed < v_current - window || probed > v_current)
            report.violations.push_back(
                {e.seq, "binary-search probe outside {v_current-(N+1),...,v_current}"});
    }
}

void check_get_last_sandwich(const linearize::ConcurrentHistory& ops, Report& report) {
    for (const auto& op : ops.ops) {
        bool is_get_last = op.name == "get_last";
        bool is_write = op.name == "write_and_f";
        if (!is_get_last && !is_write) continue;
        if (!op.completed || op.result.size() != 3 || op.args.empty()) continue;
        std::int64_t slot = op.args[0];
        std::int64_t n = op.result[0];
        // write_and_f returns its own get_last, taken after the write
        // serialized, so the write itself counts toward the lower bound.
        std::int64_t completed_before = is_write ? 1 : 0;
        std::int64_t invoked_before = is_write ? 1 : 0;
        for (const auto& other : ops.ops) {
            if (&other == &op || other.name != "write_and_f" || other.args.empty() ||
                other.args[0] != slot)
                continue;
            if (other.completed && other.response_seq < op.invoke_seq) completed_before++;
            if (other.invoke_seq < op.response_seq) invoked_before++;
        }
        if (n < completed_before || n > invoked_before)
            report.violations.push_back(
                {op.response_seq, op.name + " count outside the serialized-write sandwich"});
    }
}

}  // namespace

Report check_wfarray_lemmas(const TraceLog& log, const std::vector<WFANodeLayout>& nodes,
                            const linearize::ConcurrentHistory& public_ops) {
    Report report;
    TraceIndex idx(log);
    auto updates = collect_updates(log);
    std::map<std::int64_t, const WFANodeLayout*> by_id;
    for (const auto& n : nodes) by_id[n.id] = &n;
    for (const WFANodeLayout& n : nodes) {
        if (n.leaf) continue;
        report.merge(check_history_lemmas(log, n.hist));
        auto pubs = publishes_of(idx, n.hist);
        check_child_version_monotonicity(pubs, n, report);
        check_two_attempts(updates, pubs, n, report);
    }
    check_probe_window(log, by_id, report);
    check_get_last_sandwich(public_ops, report);
    return report;
}

std::string Report::to_string() const {
    std::ostringstream os;
    for (const Violation& v : violations) os << "seq " << v.seq << ": " << v.what << '\n';
    return os.str();
}

}  // namespace wfa::lemmas
