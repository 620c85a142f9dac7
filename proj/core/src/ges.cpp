#include "cges/ges.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <string>
#include <tuple>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include "cges/errors.hpp"

namespace cges {

namespace {

using Nodes = std::vector<VariableId>;

Nodes set_union(std::span<const VariableId> a, std::span<const VariableId> b) {
    Nodes out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Nodes set_difference(std::span<const VariableId> a, std::span<const VariableId> b) {
    Nodes out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Nodes with(Nodes nodes, VariableId v) {
    nodes.insert(std::lower_bound(nodes.begin(), nodes.end(), v), v);
    return nodes;
}

Nodes without(Nodes nodes, VariableId v) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    if (it != nodes.end() && *it == v) nodes.erase(it);
    return nodes;
}

bool is_subset(std::span<const VariableId> sub, std::span<const VariableId> super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

Nodes sorted_copy(std::span<const VariableId> nodes) {
    Nodes out(nodes.begin(), nodes.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Calls fn(subset) for every subset of `items`, by increasing size and then
/// lexicographically within a size.
template <typename Fn>
void for_each_subset(const Nodes& items, Fn&& fn) {
    const std::size_t n = items.size();
    Nodes subset;
    std::vector<std::size_t> idx;
    for (std::size_t size = 0; size <= n; ++size) {
        idx.resize(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            subset.clear();
            for (std::size_t i : idx) subset.push_back(items[i]);
            fn(subset);
            // Advance to the next combination.
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
}

void check_cap(const Nodes& candidates, VariableId x, VariableId y) {
    if (candidates.size() > kMaxSubsetCandidates)
        throw DegreeCapExceeded("operator (" + std::to_string(x) + ", " + std::to_string(y) + ") has " +
                                std::to_string(candidates.size()) + " subset candidates; the limit is " +
                                std::to_string(kMaxSubsetCandidates));
}

// Ordering shared by the heap and the tie-breaking rules: larger delta first, then
// lexicographic (x, y, |set|, set).
template <typename Op>
bool better(const Op& a, const Op& b, const Nodes& set_a, const Nodes& set_b) {
    if (a.delta != b.delta) return a.delta > b.delta;
    return std::tuple(a.x, a.y, set_a.size()) < std::tuple(b.x, b.y, set_b.size()) ||
           (std::tuple(a.x, a.y, set_a.size()) == std::tuple(b.x, b.y, set_b.size()) && set_a < set_b);
}

bool better_insert(const InsertOp& a, const InsertOp& b) { return better(a, b, a.t, b.t); }
bool better_delete(const DeleteOp& a, const DeleteOp& b) { return better(a, b, a.h, b.h); }

bool node_changed(const Pdag& before, const Pdag& after, VariableId v) {
    auto same = [](std::span<const VariableId> a, std::span<const VariableId> b) {
        return std::equal(a.begin(), a.end(), b.begin(), b.end());
    };
    return !same(before.parents(v), after.parents(v)) || !same(before.children(v), after.children(v)) ||
           !same(before.neighbors(v), after.neighbors(v));
}

double exact_score(const Pdag& g, const BdeuScore& score) { return score.graph(consistent_extension(g)); }

template <typename Op, typename Eval>
std::vector<std::optional<Op>> evaluate_parallel(const std::vector<std::pair<VariableId, VariableId>>& pairs, Eval&& eval) {
    std::vector<std::optional<Op>> out(pairs.size());
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, pairs.size()), [&](const tbb::blocked_range<std::size_t>& r) {
        for (std::size_t i = r.begin(); i != r.end(); ++i) out[i] = eval(pairs[i].first, pairs[i].second);
    });
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------- validity

std::vector<VariableId> neighbors_adjacent(const Pdag& g, VariableId y, VariableId x) {
    Nodes out;
    for (VariableId v : g.neighbors(y))
        if (v != x && g.adjacent(v, x)) out.push_back(v);
    return out;
}

bool is_clique(const Pdag& g, std::span<const VariableId> nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (!g.adjacent(nodes[i], nodes[j])) return false;
    return true;
}

bool blocks_semi_directed_paths(const Pdag& g, VariableId from, VariableId to, std::span<const VariableId> blocked) {
    if (from == to) return false;
    std::vector<char> seen(g.size(), 0);
    for (VariableId b : blocked) seen[b] = 1;
    if (seen[from]) return true;
    seen[from] = 1;
    std::vector<VariableId> stack{from};
    while (!stack.empty()) {
        VariableId v = stack.back();
        stack.pop_back();
        for (auto next : {g.children(v), g.neighbors(v)}) {
            for (VariableId w : next) {
                if (w == to) return false;
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    return true;
}

bool insert_valid(const Pdag& g, VariableId x, VariableId y, std::span<const VariableId> t) {
    if (x == y || g.adjacent(x, y)) return false;
    const Nodes ts = sorted_copy(t);
    for (VariableId v : ts)
        if (!g.has_edge(v, y) || g.adjacent(v, x)) return false;
    const Nodes clique = set_union(neighbors_adjacent(g, y, x), ts);
    return is_clique(g, clique) && blocks_semi_directed_paths(g, y, x, clique);
}

bool delete_valid(const Pdag& g, VariableId x, VariableId y, std::span<const VariableId> h) {
    if (x == y || !(g.has_arc(x, y) || g.has_edge(x, y))) return false;
    const Nodes na = neighbors_adjacent(g, y, x);
    const Nodes hs = sorted_copy(h);
    if (!is_subset(hs, na)) return false;
    return is_clique(g, set_difference(na, hs));
}

double insert_delta(const Pdag& g, const BdeuScore& score, VariableId x, VariableId y, std::span<const VariableId> t) {
    const Nodes base = set_union(set_union(g.parents(y), neighbors_adjacent(g, y, x)), sorted_copy(t));
    return score.local(y, with(base, x)) - score.local(y, base);
}

double delete_delta(const Pdag& g, const BdeuScore& score, VariableId x, VariableId y, std::span<const VariableId> h) {
    const Nodes kept = set_difference(neighbors_adjacent(g, y, x), sorted_copy(h));
    const Nodes base = without(set_union(g.parents(y), kept), x);
    return score.local(y, base) - score.local(y, with(base, x));
}

std::optional<InsertOp> best_insert(const Pdag& g, const BdeuScore& score, VariableId x, VariableId y) {
    if (x == y || g.adjacent(x, y)) return std::nullopt;
    const Nodes na = neighbors_adjacent(g, y, x);
    if (!is_clique(g, na)) return std::nullopt;
    Nodes candidates;
    for (VariableId v : g.neighbors(y))
        if (!g.adjacent(v, x)) candidates.push_back(v);
    check_cap(candidates, x, y);
    const Nodes parents(g.parents(y).begin(), g.parents(y).end());

    std::optional<InsertOp> best;
    for_each_subset(candidates, [&](const Nodes& t) {
        const Nodes clique = set_union(na, t);
        if (!is_clique(g, clique) || !blocks_semi_directed_paths(g, y, x, clique)) return;
        const Nodes base = set_union(parents, clique);
        InsertOp op{x, y, t, score.local(y, with(base, x)) - score.local(y, base)};
        if (!best || better_insert(op, *best)) best = std::move(op);
    });
    return best;
}

std::optional<DeleteOp> best_delete(const Pdag& g, const BdeuScore& score, VariableId x, VariableId y) {
    if (x == y || !(g.has_arc(x, y) || g.has_edge(x, y))) return std::nullopt;
    const Nodes na = neighbors_adjacent(g, y, x);
    check_cap(na, x, y);
    const Nodes parents = without(Nodes(g.parents(y).begin(), g.parents(y).end()), x);

    std::optional<DeleteOp> best;
    for_each_subset(na, [&](const Nodes& h) {
        const Nodes kept = set_difference(na, h);
        if (!is_clique(g, kept)) return;
        const Nodes base = set_union(parents, kept);
        DeleteOp op{x, y, h, score.local(y, base) - score.local(y, with(base, x))};
        if (!best || better_delete(op, *best)) best = std::move(op);
    });
    return best;
}

Pdag apply_insert(const Pdag& g, const InsertOp& op) {
    Pdag next = g;
    next.add_arc(op.x, op.y);
    for (VariableId t : op.t) next.orient(t, op.y);
    return complete_to_cpdag(next);
}

Pdag apply_delete(const Pdag& g, const DeleteOp& op) {
    Pdag next = g;
    next.disconnect(op.x, op.y);
    for (VariableId h : op.h) {
        if (next.has_edge(op.y, h)) next.orient(op.y, h);
        if (next.has_edge(op.x, h)) next.orient(op.x, h);
    }
    return complete_to_cpdag(next);
}

std::vector<InsertOp> improving_inserts(const Pdag& g, const BdeuScore& score, const SearchConfig& cfg) {
    std::vector<InsertOp> out;
    const auto n = static_cast<VariableId>(g.size());
    for (VariableId x = 0; x < n; ++x)
        for (VariableId y = 0; y < n; ++y) {
            if (x == y || g.adjacent(x, y) || !cfg.permits(x, y)) continue;
            Nodes candidates;
            for (VariableId v : g.neighbors(y))
                if (!g.adjacent(v, x)) candidates.push_back(v);
            check_cap(candidates, x, y);
            for_each_subset(candidates, [&](const Nodes& t) {
                if (!insert_valid(g, x, y, t)) return;
                const double delta = insert_delta(g, score, x, y, t);
                if (delta > kMinImprovement) out.push_back({x, y, t, delta});
            });
        }
    return out;
}

std::vector<DeleteOp> improving_deletes(const Pdag& g, const BdeuScore& score, const SearchConfig& cfg) {
    std::vector<DeleteOp> out;
    const auto n = static_cast<VariableId>(g.size());
    for (VariableId x = 0; x < n; ++x)
        for (VariableId y = 0; y < n; ++y) {
            if (x == y || !(g.has_arc(x, y) || g.has_edge(x, y)) || !cfg.permits(x, y)) continue;
            const Nodes na = neighbors_adjacent(g, y, x);
            check_cap(na, x, y);
            for_each_subset(na, [&](const Nodes& h) {
                if (!delete_valid(g, x, y, h)) return;
                const double delta = delete_delta(g, score, x, y, h);
                if (delta > kMinImprovement) out.push_back({x, y, h, delta});
            });
        }
    return out;
}

// ---------------------------------------------------------------------------- phases

PhaseResult fes(const Pdag& start, const BdeuScore& score, const SearchConfig& cfg) {
    PhaseResult result{start, 0, {}};
    Pdag& g = result.cpdag;
    const auto n = static_cast<VariableId>(g.size());
    const std::size_t budget = cfg.insert_limit.value_or(static_cast<std::size_t>(-1));
    if (budget == 0) return result;

    auto worse = [](const InsertOp& a, const InsertOp& b) { return better_insert(b, a); };
    std::priority_queue<InsertOp, std::vector<InsertOp>, decltype(worse)> heap(worse);

    auto push_scored = [&](const std::vector<std::pair<VariableId, VariableId>>& pairs) {
        auto scored = evaluate_parallel<InsertOp>(pairs, [&](VariableId x, VariableId y) { return best_insert(g, score, x, y); });
        for (auto& op : scored)
            if (op && op->delta > kMinImprovement) heap.push(std::move(*op));
    };
    auto full_scan = [&] {
        std::vector<std::pair<VariableId, VariableId>> pairs;
        for (VariableId a = 0; a < n; ++a)
            for (VariableId b = a + 1; b < n; ++b)
                if (cfg.permits(a, b) && !g.adjacent(a, b)) {
                    pairs.emplace_back(a, b);
                    pairs.emplace_back(b, a);
                }
        push_scored(pairs);
    };

    full_scan();
    bool applied_since_scan = false;
    while (result.applied < budget) {
        if (heap.empty()) {
            // Path-validity changes far from the edited nodes are only seen by a full rescan.
            if (!applied_since_scan) break;
            applied_since_scan = false;
            full_scan();
            continue;
        }
        InsertOp top = heap.top();
        heap.pop();
        auto current = best_insert(g, score, top.x, top.y);
        if (!current || current->delta <= kMinImprovement) continue;
        if (current->delta != top.delta || current->t != top.t) {
            heap.push(std::move(*current));
            continue;
        }

        Pdag next = apply_insert(g, *current);
        std::set<std::pair<VariableId, VariableId>> rescore;
        for (VariableId c = 0; c < n; ++c) {
            if (!node_changed(g, next, c)) continue;
            for (VariableId o = 0; o < n; ++o)
                if (o != c && cfg.permits(o, c) && !next.adjacent(o, c)) {
                    rescore.emplace(o, c);
                    rescore.emplace(c, o);
                }
        }
        g = std::move(next);
        ++result.applied;
        applied_since_scan = true;
        if (cfg.trace)
            result.trace.push_back({TraceRecord::Phase::insert, current->x, current->y, current->t, current->delta, exact_score(g, score)});
        push_scored({rescore.begin(), rescore.end()});
    }
    return result;
}

PhaseResult bes(const Pdag& start, const BdeuScore& score, const SearchConfig& cfg) {
    PhaseResult result{start, 0, {}};
    Pdag& g = result.cpdag;
    while (true) {
        std::vector<std::pair<VariableId, VariableId>> pairs;
        for (const Arc& a : g.arcs())
            if (cfg.permits(a.from, a.to)) pairs.emplace_back(a.from, a.to);
        for (const VariablePair& e : g.edges())
            if (cfg.permits(e.first, e.second)) {
                pairs.emplace_back(e.first, e.second);
                pairs.emplace_back(e.second, e.first);
            }
        auto scored = evaluate_parallel<DeleteOp>(pairs, [&](VariableId x, VariableId y) { return best_delete(g, score, x, y); });
        std::optional<DeleteOp> best;
        for (auto& op : scored)
            if (op && op->delta > kMinImprovement && (!best || better_delete(*op, *best))) best = std::move(op);
        if (!best) break;
        g = apply_delete(g, *best);
        ++result.applied;
        if (cfg.trace) result.trace.push_back({TraceRecord::Phase::remove, best->x, best->y, best->h, best->delta, exact_score(g, score)});
    }
    return result;
}

GesResult ges(const Pdag& init, const BdeuScore& score, const SearchConfig& cfg) {
    if (init.size() != score.num_variables()) throw DimensionMismatch("initial graph and dataset have different variable counts");
    GesResult result;
    result.cpdag = complete_to_cpdag(init);
    SearchConfig phase_cfg = cfg;
    while (true) {
        if (cfg.insert_limit) phase_cfg.insert_limit = *cfg.insert_limit - result.inserts;
        PhaseResult forward = fes(result.cpdag, score, phase_cfg);
        PhaseResult backward = bes(forward.cpdag, score, phase_cfg);
        result.inserts += forward.applied;
        result.deletes += backward.applied;
        result.trace.insert(result.trace.end(), forward.trace.begin(), forward.trace.end());
        result.trace.insert(result.trace.end(), backward.trace.begin(), backward.trace.end());
        result.cpdag = std::move(backward.cpdag);
        if (backward.applied == 0) break;
    }
    result.score = exact_score(result.cpdag, score);
    return result;
}

GesResult ges(const Dag& init, const BdeuScore& score, const SearchConfig& cfg) {
    return ges(Pdag::from_dag(init), score, cfg);
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
    const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (const TraceRecord& r : trace) {
        out << (r.phase == TraceRecord::Phase::insert ? "insert" : "delete") << ' ' << r.x << ' ' << r.y << " {";
        for (std::size_t i = 0; i < r.set.size(); ++i) out << (i ? "," : "") << r.set[i];
        out << "} " << r.delta << ' ' << r.score << '\n';
    }
    out.precision(precision);
}

}  // namespace cges
