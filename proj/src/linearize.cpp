#include "wfa/linearize.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace wfa::linearize {

ConcurrentHistory ConcurrentHistory::from_log(const TraceLog& log,
                                              const std::vector<std::string>& public_names) {
    auto is_public = [&](const std::string& name) {
        return public_names.empty() ||
               std::find(public_names.begin(), public_names.end(), name) != public_names.end();
    };
    std::map<std::uint64_t, Operation> by_id;
    for (const OpEvent& e : log.op_events) {
        if (!is_public(e.name)) continue;
        if (e.invoke) {
            Operation op;
            op.op_id = e.op_id;
            op.thread = e.tid;
            op.name = e.name;
            op.args = e.args;
            op.invoke_seq = e.seq;
            by_id.emplace(e.op_id, std::move(op));
        } else {
            auto it = by_id.find(e.op_id);
            if (it == by_id.end()) continue;
            it->second.result = e.args;
            it->second.response_seq = e.seq;
            it->second.completed = true;
        }
    }
    ConcurrentHistory h;
    for (auto& [id, op] : by_id) h.ops.push_back(std::move(op));
    std::sort(h.ops.begin(), h.ops.end(),
              [](const Operation& a, const Operation& b) { return a.invoke_seq < b.invoke_seq; });
    return h;
}

std::string ConcurrentHistory::dump() const {
    std::ostringstream os;
    struct Line {
        std::uint64_t seq;
        const Operation* op;
        bool invoke;
    };
    std::vector<Line> lines;
    for (const Operation& op : ops) {
        lines.push_back({op.invoke_seq, &op, true});
        if (op.completed) lines.push_back({op.response_seq, &op, false});
    }
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.seq < b.seq; });
    for (const Line& l : lines) {
        const Operation& op = *l.op;
        os << l.seq << ' ' << op.thread << ' ' << op.op_id << ' '
           << (l.invoke ? "invoke" : "response") << ' ' << op.name;
        const auto& payload = l.invoke ? op.args : op.result;
        os << ' ' << payload.size();
        for (std::int64_t x : payload) os << ' ' << x;
        os << '\n';
    }
    return os.str();
}

ConcurrentHistory ConcurrentHistory::parse(const std::string& text) {
    std::map<std::uint64_t, Operation> by_id;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::uint64_t seq, op_id;
        int thread;
        std::string kind, name;
        std::size_t count;
        if (!(ls >> seq >> thread >> op_id >> kind >> name >> count))
            throw std::invalid_argument("ConcurrentHistory::parse: bad line: " + line);
        std::vector<std::int64_t> payload(count);
        for (auto& x : payload)
            if (!(ls >> x)) throw std::invalid_argument("ConcurrentHistory::parse: bad line: " + line);
        if (kind == "invoke") {
            Operation op;
            op.op_id = op_id;
            op.thread = thread;
            op.name = name;
            op.args = std::move(payload);
            op.invoke_seq = seq;
            by_id.emplace(op_id, std::move(op));
        } else if (kind == "response") {
            auto it = by_id.find(op_id);
            if (it == by_id.end())
                throw std::invalid_argument("ConcurrentHistory::parse: response without invoke");
            it->second.result = std::move(payload);
            it->second.response_seq = seq;
            it->second.completed = true;
        } else {
            throw std::invalid_argument("ConcurrentHistory::parse: bad kind: " + kind);
        }
    }
    ConcurrentHistory h;
    for (auto& [id, op] : by_id) h.ops.push_back(std::move(op));
    std::sort(h.ops.begin(), h.ops.end(),
              [](const Operation& a, const Operation& b) { return a.invoke_seq < b.invoke_seq; });
    return h;
}

namespace {

struct Searcher {
    const std::vector<Operation>& ops;
    std::uint32_t completed_mask = 0;
    std::unordered_set<std::string> seen;
    std::vector<std::uint64_t> order;

    bool dfs(std::uint32_t mask, const Oracle& oracle) {
        if ((mask & completed_mask) == completed_mask) return true;
        std::string key = std::to_string(mask) + '|' + oracle.state_key();
        if (!seen.insert(key).second) return false;
        for (std::size_t i = 0; i < ops.size(); i++) {
            std::uint32_t bit = std::uint32_t{1} << i;
            if (mask & bit) continue;
            // Real-time order: every op that responded before this one's
            // invoke must already be serialized.
            bool minimal = true;
            for (std::size_t j = 0; j < ops.size(); j++) {
                std::uint32_t jbit = std::uint32_t{1} << j;
                if ((mask & jbit) || j == i) continue;
                if (ops[j].completed && ops[j].response_seq < ops[i].invoke_seq) {
                    minimal = false;
                    break;
                }
            }
            if (!minimal) continue;
            auto next = oracle.clone();
            if (!next->apply(ops[i])) continue;
            order.push_back(ops[i].op_id);
            if (dfs(mask | bit, *next)) return true;
            order.pop_back();
        }
        return false;
    }
};

Verdict check_no_counterexample(const ConcurrentHistory& history, const Oracle& initial,
                                std::size_t size_cap) {
    Verdict v;
    if (history.ops.size() > size_cap) {
        v.too_large = true;
        return v;
    }
    Searcher s{history.ops, 0, {}, {}};
    for (std::size_t i = 0; i < history.ops.size(); i++)
        if (history.ops[i].completed) s.completed_mask |= std::uint32_t{1} << i;
    v.linearizable = s.dfs(0, initial);
    if (v.linearizable) {
        v.witness = s.order;
        // Self-check: the witness must replay cleanly.
        auto replay = initial.clone();
        for (std::uint64_t id : v.witness) {
            auto it = std::find_if(history.ops.begin(), history.ops.end(),
                                   [&](const Operation& op) { return op.op_id == id; });
            if (it == history.ops.end() || !replay->apply(*it))
                throw std::logic_error("linearize: witness failed replay self-check");
        }
    }
    return v;
}

}  // namespace

Verdict check(const ConcurrentHistory& history, const Oracle& initial, std::size_t size_cap) {
    if (size_cap > 30) size_cap = 30;
    Verdict v = check_no_counterexample(history, initial, size_cap);
    if (v.linearizable || v.too_large) return v;
    // Minimal failing prefix, by invoke order. An op stays pending in the
    // prefix when its response falls outside it.
    for (std::size_t k = 1; k <= history.ops.size(); k++) {
        std::uint64_t cut = history.ops[k - 1].invoke_seq;
        ConcurrentHistory prefix;
        for (const Operation& op : history.ops) {
            if (op.invoke_seq > cut) continue;
            Operation copy = op;
            if (copy.completed && copy.response_seq > cut) {
                copy.completed = false;
                copy.result.clear();
                copy.response_seq = 0;
            }
            prefix.ops.push_back(std::move(copy));
        }
        Verdict pv = check_no_counterexample(prefix, initial, size_cap);
        if (!pv.linearizable && !pv.too_large) {
            v.counterexample = prefix.ops;
            return v;
        }
    }
    v.counterexample = history.ops;  // full history is its own minimal prefix
    return v;
}

// --- Oracles ---

std::string HistoryOracle::state_key() const {
    std::ostringstream os;
    os << seq_.current_version();
    for (std::int64_t v = seq_.current_version() - seq_.capacity() + 1; v <= seq_.current_version(); v++) {
        auto x = seq_.get(v);
        os << '/' << (x ? *x : -1) << (x ? 'y' : 'n');
    }
    return os.str();
}

bool HistoryOracle::apply(const Operation& op) {
    if (op.name == "get_current") {
        auto [v, value] = seq_.get_current();
        return !op.completed || (op.result.size() == 2 && op.result[0] == v && op.result[1] == value);
    }
    if (op.name == "get") {
        auto x = seq_.get(op.args.at(0));
        if (!op.completed) return true;
        if (op.result.size() != 2) return false;
        if (!x) return op.result[0] == 0;
        return op.result[0] == 1 && op.result[1] == *x;
    }
    if (op.name == "publish") {
        bool ok = seq_.publish(op.args.at(1), op.args.at(2));
        return !op.completed || (op.result.size() == 1 && op.result[0] == (ok ? 1 : 0));
    }
    return false;
}

std::string WFAOracle::state_key() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < seq_.size(); i++) {
        auto t = seq_.get_last(i);
        os << t.n << ',' << slot_version_[i] << ',' << t.agg << ';';
    }
    os << seq_.fold() << '|' << last_version_ << '|' << last_read_version_;
    return os.str();
}

bool WFAOracle::apply(const Operation& op) {
    if (op.name == "write_and_f") {
        std::size_t i = static_cast<std::size_t>(op.args.at(0));
        if (i >= seq_.size()) return false;
        seqspec::Triple t = seq_.write_and_f(i, op.args.at(1));
        if (!op.completed) {
            // The write takes effect even when the caller never sees the
            // result; nothing to validate, but the slot's version becomes
            // unknown. Pin it to the current floor so later get_last checks
            // stay sound only for completed predecessors.
            slot_version_[i] = -1;
            return true;
        }
        if (op.result.size() != 3) return false;
        std::int64_t v = op.result[1];
        if (op.result[0] != t.n || op.result[2] != t.agg) return false;
        if (v < last_version_ || v <= last_read_version_) return false;
        last_version_ = v;
        slot_version_[i] = v;
        return true;
    }
    if (op.name == "read") {
        auto [ver, agg] = seq_.read();
        (void)ver;
        if (!op.completed) return true;
        if (op.result.size() != 2) return false;
        std::int64_t v = op.result[0];
        if (op.result[1] != agg) return false;
        if (v < last_version_) return false;
        last_version_ = v;
        if (v > last_read_version_) last_read_version_ = v;
        return true;
    }
    if (op.name == "get_last") {
        std::size_t i = static_cast<std::size_t>(op.args.at(0));
        if (i >= seq_.size()) return false;
        seqspec::Triple t = seq_.get_last(i);
        if (!op.completed) return true;
        if (op.result.size() != 3) return false;
        if (op.result[0] != t.n || op.result[2] != t.agg) return false;
        // The version must be the one returned by this slot's n-th write;
        // unknown (-1) when that write's result was never observed.
        return slot_version_[i] == -1 || op.result[1] == slot_version_[i];
    }
    return false;
}

std::string FAAOracle::state_key() const { return std::to_string(seq_.read()); }

bool FAAOracle::apply(const Operation& op) {
    if (op.name == "faa") {
        std::int64_t r = seq_.add(op.args.at(0));
        return !op.completed || (op.result.size() == 1 && op.result[0] == r);
    }
    if (op.name == "read") {
        return !op.completed || (op.result.size() == 1 && op.result[0] == seq_.read());
    }
    return false;
}

}  // namespace wfa::linearize
