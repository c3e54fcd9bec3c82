#include "wfa/wfarray.hpp"

#include <stdexcept>

namespace wfa {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// Node-value payload layout: [T0, T1, v0, v1].
std::int64_t nv_value(const RegisterValue& p, int side) { return p[side]; }
std::int64_t nv_version(const RegisterValue& p, int side) { return p[2 + side]; }

}  // namespace

WFArray::WFArray(Arena& arena, Fold f, std::span<const std::int64_t> initial)
    : arena_(arena), f_(f), size_(static_cast<int>(initial.size())) {
    if (initial.empty()) throw std::invalid_argument("WFArray: size must be >= 1");
    std::int64_t agg = 0;
    root_ = build(initial, &agg);
    writer_busy_ = std::make_unique<std::atomic<bool>[]>(static_cast<std::size_t>(size_));
    writer_taken_ = std::make_unique<std::atomic<bool>[]>(static_cast<std::size_t>(size_));
    for (int i = 0; i < size_; i++) {
        writer_busy_[static_cast<std::size_t>(i)] = false;
        writer_taken_[static_cast<std::size_t>(i)] = false;
    }
}

std::unique_ptr<WFArray::Node> WFArray::build(std::span<const std::int64_t> initial,
                                              std::int64_t* agg_out) {
    auto n = std::make_unique<Node>();
    n->id = next_node_id_++;
    n->size = static_cast<int>(initial.size());
    if (n->leaf()) {
        *agg_out = initial[0];
        n->leaf_state = arena_.alloc(RegisterValue{0, initial[0]});
        return n;
    }
    int half = n->half();
    std::int64_t agg_left = 0, agg_right = 0;
    n->child[0] = build(initial.first(static_cast<std::size_t>(half)), &agg_left);
    n->child[1] = build(initial.subspan(static_cast<std::size_t>(half)), &agg_right);
    std::int64_t agg = f_(agg_left, agg_right);
    *agg_out = agg;
    // History of size N+1 covers the N concurrent updates a node can see.
    n->hist = std::make_unique<HistoryObject>(
        arena_, n->size + 1, n->size,
        RegisterValue{agg_left, agg_right, 0, 0}, RegisterValue{0, 0, 0, 0}, n->id);
    n->last.reserve(static_cast<std::size_t>(n->size));
    for (int x = 0; x < n->size; x++) n->last.push_back(arena_.alloc(RegisterValue{0, 0, agg}));
    return n;
}

std::pair<std::int64_t, std::int64_t> WFArray::read(Node& n) {
    if (n.leaf()) {
        RegisterValue s = arena_.rd(n.leaf_state);
        return {s[0], s[1]};
    }
    auto [v, h] = n.hist->get_current();
    return {v, f_(nv_value(h, 0), nv_value(h, 1))};
}

bool WFArray::update(Node& n, int i, int attempt) {
    const std::int64_t inv_args[] = {n.id, i, attempt};
    std::uint64_t op = arena_.op_invoke("update", inv_args);
    auto [v, h] = n.hist->get_current();
    auto [v0, t0] = read(*n.child[0]);
    auto [v1, t1] = read(*n.child[1]);
    RegisterValue node_value{t0, t1, v0, v1};
    help(n, static_cast<int>(floor_mod(v, n.size)));
    bool ok = n.hist->publish(i, v + 1, node_value);
    const std::int64_t res[] = {ok ? 1 : 0, v + 1};
    arena_.op_response(op, res);
    return ok;
}

void WFArray::help(Node& n, int x) {
    int side = x < n.half() ? 0 : 1;
    int child_id = side == 0 ? x : x - n.half();
    WFATriple lc = get_last(*n.child[side], child_id);
    std::int64_t v_current = n.hist->get_current().first;

    // First v in {v_current-(N+1), ..., v_current} whose retained node value
    // already covers the child's version. The predicate can flip mid-search;
    // a stale answer only makes the later gets fail, never installs a wrong
    // triple.
    std::int64_t lo = v_current - (n.size + 1);
    std::int64_t hi = v_current;
    std::int64_t found = -1;
    while (lo <= hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        const std::int64_t probe[] = {n.id, x, v_current, mid};
        arena_.op_invoke("probe", probe);
        auto g = n.hist->get(mid);
        if (g && nv_version(*g, side) >= lc.v) {
            found = mid;
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    if (found < 0) return;
    auto h_old = n.hist->get(found - 1);
    auto h_new = n.hist->get(found);
    if (!h_old || !h_new) return;
    std::int64_t agg = side == 0 ? f_(lc.agg, nv_value(*h_old, 1))
                                 : f_(nv_value(*h_new, 0), lc.agg);
    RegisterValue l = arena_.rd(n.last[static_cast<std::size_t>(x)]);
    if (l[0] < lc.n)
        arena_.cas(n.last[static_cast<std::size_t>(x)], l, RegisterValue{lc.n, found, agg});
}

WFATriple WFArray::get_last(Node& n, int x) {
    if (n.leaf()) {
        RegisterValue s = arena_.rd(n.leaf_state);
        return {s[0], s[0], s[1]};
    }
    help(n, x);
    RegisterValue l = arena_.rd(n.last[static_cast<std::size_t>(x)]);
    return {l[0], l[1], l[2]};
}

WFATriple WFArray::write_and_f(Node& n, int i, std::int64_t value) {
    if (n.leaf()) {
        RegisterValue s = arena_.rd(n.leaf_state);
        arena_.wr(n.leaf_state, RegisterValue{s[0] + 1, value});
        return {s[0] + 1, s[0] + 1, value};
    }
    int side = i < n.half() ? 0 : 1;
    int child_id = side == 0 ? i : i - n.half();
    write_and_f(*n.child[side], child_id, value);
    if (!update(n, i, 1)) update(n, i, 2);  // at most two attempts ever needed
    return get_last(n, i);
}

WFATriple WFArray::write_and_f(int i, std::int64_t value) {
    if (i < 0 || i >= size_) throw std::out_of_range("WFArray: slot index");
    if (writer_busy_[static_cast<std::size_t>(i)].exchange(true))
        throw std::logic_error("WFArray: concurrent write_and_f on one slot");
    struct Release {
        std::atomic<bool>& flag;
        ~Release() { flag = false; }
    } release{writer_busy_[static_cast<std::size_t>(i)]};
    return write_and_f(*root_, i, value);
}

WFATriple WFArray::get_last(int i) {
    if (i < 0 || i >= size_) throw std::out_of_range("WFArray: slot index");
    return get_last(*root_, i);
}

std::pair<std::int64_t, std::int64_t> WFArray::read() { return read(*root_); }

WFArray::Writer WFArray::acquire_writer(int i) {
    if (i < 0 || i >= size_) throw std::out_of_range("WFArray: slot index");
    if (writer_taken_[static_cast<std::size_t>(i)].exchange(true))
        throw std::logic_error("WFArray: writer handle for this slot already acquired");
    return Writer(this, i);
}

std::vector<WFANodeLayout> WFArray::layout() const {
    std::vector<WFANodeLayout> out;
    auto walk = [&](auto&& self, const Node& n) -> void {
        WFANodeLayout nl;
        nl.id = n.id;
        nl.size = n.size;
        nl.leaf = n.leaf();
        if (n.leaf()) {
            nl.leaf_state = n.leaf_state;
        } else {
            nl.hist = n.hist->layout();
            nl.last = n.last;
            nl.left = n.child[0]->id;
            nl.right = n.child[1]->id;
        }
        out.push_back(std::move(nl));
        if (!n.leaf()) {
            self(self, *n.child[0]);
            self(self, *n.child[1]);
        }
    };
    walk(walk, *root_);
    return out;
}

}  // namespace wfa
