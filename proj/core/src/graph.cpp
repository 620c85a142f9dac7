#include "cges/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

#include "cges/errors.hpp"

namespace cges {

namespace {

bool sorted_contains(const std::vector<VariableId>& v, VariableId x) {
    return std::binary_search(v.begin(), v.end(), x);
}

bool sorted_insert(std::vector<VariableId>& v, VariableId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) return false;
    v.insert(it, x);
    return true;
}

bool sorted_erase(std::vector<VariableId>& v, VariableId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) return false;
    v.erase(it);
    return true;
}

void require_index(VariableId v, std::size_t n) {
    if (v < 0 || static_cast<std::size_t>(v) >= n)
        throw std::out_of_range("variable index " + std::to_string(v) + " outside [0, " + std::to_string(n) + ")");
}

}  // namespace

// ---------------------------------------------------------------------------- Dag

void Dag::check_node(VariableId v) const { require_index(v, size()); }

bool Dag::add_arc(VariableId from, VariableId to) {
    check_node(from);
    check_node(to);
    if (from == to) throw std::invalid_argument("self-loop on node " + std::to_string(from));
    if (has_arc(to, from))
        throw std::invalid_argument("arc " + std::to_string(to) + "->" + std::to_string(from) + " already present");
    if (!sorted_insert(children_[from], to)) return false;
    sorted_insert(parents_[to], from);
    ++num_arcs_;
    return true;
}

bool Dag::remove_arc(VariableId from, VariableId to) {
    check_node(from);
    check_node(to);
    if (!sorted_erase(children_[from], to)) return false;
    sorted_erase(parents_[to], from);
    --num_arcs_;
    return true;
}

bool Dag::has_arc(VariableId from, VariableId to) const { return sorted_contains(children_[from], to); }

std::vector<Arc> Dag::arcs() const {
    std::vector<Arc> out;
    out.reserve(num_arcs_);
    for (VariableId u = 0; u < static_cast<VariableId>(size()); ++u)
        for (VariableId v : children_[u]) out.push_back({u, v});
    return out;
}

bool Dag::is_acyclic() const {
    try {
        topological_order(*this);
        return true;
    } catch (const CyclicGraph&) {
        return false;
    }
}

bool Dag::has_directed_path(VariableId from, VariableId to) const {
    std::vector<char> seen(size(), 0);
    std::vector<VariableId> stack(children_[from].begin(), children_[from].end());
    while (!stack.empty()) {
        VariableId v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        if (seen[v]) continue;
        seen[v] = 1;
        for (VariableId c : children_[v])
            if (!seen[c]) stack.push_back(c);
    }
    return false;
}

// ---------------------------------------------------------------------------- Pdag

Pdag Pdag::from_dag(const Dag& dag) {
    Pdag p(dag.size());
    for (const Arc& a : dag.arcs()) p.add_arc(a.from, a.to);
    return p;
}

void Pdag::check_pair(VariableId a, VariableId b) const {
    require_index(a, size());
    require_index(b, size());
    if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
}

bool Pdag::add_arc(VariableId from, VariableId to) {
    check_pair(from, to);
    if (has_arc(from, to)) return false;
    if (adjacent(from, to))
        throw std::invalid_argument("nodes " + std::to_string(from) + " and " + std::to_string(to) + " already adjacent");
    sorted_insert(children_[from], to);
    sorted_insert(parents_[to], from);
    ++num_arcs_;
    return true;
}

bool Pdag::add_edge(VariableId a, VariableId b) {
    check_pair(a, b);
    if (has_edge(a, b)) return false;
    if (adjacent(a, b))
        throw std::invalid_argument("nodes " + std::to_string(a) + " and " + std::to_string(b) + " already adjacent");
    sorted_insert(neighbors_[a], b);
    sorted_insert(neighbors_[b], a);
    ++num_edges_;
    return true;
}

bool Pdag::remove_arc(VariableId from, VariableId to) {
    check_pair(from, to);
    if (!sorted_erase(children_[from], to)) return false;
    sorted_erase(parents_[to], from);
    --num_arcs_;
    return true;
}

bool Pdag::remove_edge(VariableId a, VariableId b) {
    check_pair(a, b);
    if (!sorted_erase(neighbors_[a], b)) return false;
    sorted_erase(neighbors_[b], a);
    --num_edges_;
    return true;
}

bool Pdag::disconnect(VariableId a, VariableId b) {
    return remove_edge(a, b) || remove_arc(a, b) || remove_arc(b, a);
}

void Pdag::orient(VariableId from, VariableId to) {
    if (!remove_edge(from, to))
        throw std::invalid_argument("no undirected edge " + std::to_string(from) + "--" + std::to_string(to));
    add_arc(from, to);
}

bool Pdag::has_arc(VariableId from, VariableId to) const { return sorted_contains(children_[from], to); }

bool Pdag::has_edge(VariableId a, VariableId b) const { return sorted_contains(neighbors_[a], b); }

std::vector<VariableId> Pdag::adjacents(VariableId v) const {
    std::vector<VariableId> out;
    out.reserve(parents_[v].size() + children_[v].size() + neighbors_[v].size());
    out.insert(out.end(), parents_[v].begin(), parents_[v].end());
    out.insert(out.end(), children_[v].begin(), children_[v].end());
    out.insert(out.end(), neighbors_[v].begin(), neighbors_[v].end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Arc> Pdag::arcs() const {
    std::vector<Arc> out;
    out.reserve(num_arcs_);
    for (VariableId u = 0; u < static_cast<VariableId>(size()); ++u)
        for (VariableId v : children_[u]) out.push_back({u, v});
    return out;
}

std::vector<VariablePair> Pdag::edges() const {
    std::vector<VariablePair> out;
    out.reserve(num_edges_);
    for (VariableId u = 0; u < static_cast<VariableId>(size()); ++u)
        for (VariableId v : neighbors_[u])
            if (u < v) out.push_back({u, v});
    return out;
}

std::vector<VariablePair> Pdag::skeleton() const {
    std::vector<VariablePair> out = edges();
    for (const Arc& a : arcs()) out.push_back(VariablePair::of(a.from, a.to));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------- UndirectedGraph

bool UndirectedGraph::add_edge(VariableId a, VariableId b) {
    require_index(a, size());
    require_index(b, size());
    if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
    if (!sorted_insert(neighbors_[a], b)) return false;
    sorted_insert(neighbors_[b], a);
    ++num_edges_;
    return true;
}

bool UndirectedGraph::has_edge(VariableId a, VariableId b) const { return sorted_contains(neighbors_[a], b); }

std::vector<VariablePair> UndirectedGraph::edges() const {
    std::vector<VariablePair> out;
    out.reserve(num_edges_);
    for (VariableId u = 0; u < static_cast<VariableId>(size()); ++u)
        for (VariableId v : neighbors_[u])
            if (u < v) out.push_back({u, v});
    return out;
}

// ---------------------------------------------------------------------------- algorithms

std::vector<VariableId> topological_order(const Dag& g) {
    const auto n = static_cast<VariableId>(g.size());
    std::vector<std::size_t> indegree(n);
    std::priority_queue<VariableId, std::vector<VariableId>, std::greater<>> ready;
    for (VariableId v = 0; v < n; ++v) {
        indegree[v] = g.parents(v).size();
        if (indegree[v] == 0) ready.push(v);
    }
    std::vector<VariableId> order;
    order.reserve(n);
    while (!ready.empty()) {
        VariableId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (VariableId c : g.children(v))
            if (--indegree[c] == 0) ready.push(c);
    }
    if (order.size() != g.size()) throw CyclicGraph();
    return order;
}

UndirectedGraph moralize(const Dag& g) {
    UndirectedGraph moral(g.size());
    for (VariableId v = 0; v < static_cast<VariableId>(g.size()); ++v) {
        auto pa = g.parents(v);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            moral.add_edge(pa[i], v);
            for (std::size_t j = i + 1; j < pa.size(); ++j) moral.add_edge(pa[i], pa[j]);
        }
    }
    return moral;
}

bool d_separated(const Dag& g, VariableId x, VariableId y, std::span<const VariableId> z) {
    const std::size_t n = g.size();
    require_index(x, n);
    require_index(y, n);
    if (x == y) throw std::invalid_argument("d_separated: x and y must differ");
    std::vector<char> observed(n, 0);
    for (VariableId v : z) {
        require_index(v, n);
        observed[v] = 1;
    }
    if (observed[x] || observed[y]) throw std::invalid_argument("d_separated: x and y must not be in z");

    // Nodes with an observed descendant (z and its ancestors) open colliders.
    std::vector<char> opens_collider(n, 0);
    std::vector<VariableId> stack(z.begin(), z.end());
    while (!stack.empty()) {
        VariableId v = stack.back();
        stack.pop_back();
        if (opens_collider[v]) continue;
        opens_collider[v] = 1;
        for (VariableId p : g.parents(v)) stack.push_back(p);
    }

    // Traverse (node, arrived-from-child) states; from-child = moving against arc direction.
    std::vector<char> visited_up(n, 0), visited_down(n, 0);
    std::vector<std::pair<VariableId, bool>> frontier{{x, true}};
    while (!frontier.empty()) {
        auto [v, from_child] = frontier.back();
        frontier.pop_back();
        auto& seen = from_child ? visited_up : visited_down;
        if (seen[v]) continue;
        seen[v] = 1;
        if (v == y) return false;
        if (from_child) {
            if (!observed[v]) {
                for (VariableId p : g.parents(v)) frontier.emplace_back(p, true);
                for (VariableId c : g.children(v)) frontier.emplace_back(c, false);
            }
        } else {
            if (!observed[v])
                for (VariableId c : g.children(v)) frontier.emplace_back(c, false);
            if (opens_collider[v])
                for (VariableId p : g.parents(v)) frontier.emplace_back(p, true);
        }
    }
    return true;
}

std::vector<std::array<VariableId, 3>> v_structures(const Dag& g) {
    std::vector<std::array<VariableId, 3>> out;
    for (VariableId c = 0; c < static_cast<VariableId>(g.size()); ++c) {
        auto pa = g.parents(c);
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = i + 1; j < pa.size(); ++j)
                if (!g.adjacent(pa[i], pa[j])) out.push_back({pa[i], c, pa[j]});
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Meek rule premises for orienting the undirected edge a--b as a->b.
bool meek_orients(const Pdag& p, VariableId a, VariableId b) {
    // R1: c -> a, c and b non-adjacent.
    for (VariableId c : p.parents(a))
        if (!p.adjacent(c, b)) return true;
    // R2: a -> c -> b.
    for (VariableId c : p.children(a))
        if (p.has_arc(c, b)) return true;
    // R3: a--c -> b, a--d -> b, c and d non-adjacent.
    auto na = p.neighbors(a);
    for (std::size_t i = 0; i < na.size(); ++i) {
        if (na[i] == b || !p.has_arc(na[i], b)) continue;
        for (std::size_t j = i + 1; j < na.size(); ++j)
            if (na[j] != b && p.has_arc(na[j], b) && !p.adjacent(na[i], na[j])) return true;
    }
    // R4: a--c -> d -> b, a adjacent to d, c and b non-adjacent.
    for (VariableId c : na) {
        if (c == b || p.adjacent(c, b)) continue;
        for (VariableId d : p.children(c))
            if (d != a && p.has_arc(d, b) && p.adjacent(a, d)) return true;
    }
    return false;
}

void apply_meek_rules(Pdag& p) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const VariablePair& e : p.edges()) {
            if (!p.has_edge(e.first, e.second)) continue;
            if (meek_orients(p, e.first, e.second)) {
                p.orient(e.first, e.second);
                changed = true;
            } else if (meek_orients(p, e.second, e.first)) {
                p.orient(e.second, e.first);
                changed = true;
            }
        }
    }
}

}  // namespace

Pdag dag_to_cpdag(const Dag& g) {
    Pdag p(g.size());
    std::set<Arc> compelled;
    for (const auto& [a, c, b] : v_structures(g)) {
        compelled.insert({a, c});
        compelled.insert({b, c});
    }
    for (const Arc& arc : g.arcs()) {
        if (compelled.contains(arc))
            p.add_arc(arc.from, arc.to);
        else
            p.add_edge(arc.from, arc.to);
    }
    apply_meek_rules(p);
    return p;
}

Pdag complete_to_cpdag(const Pdag& p) { return dag_to_cpdag(consistent_extension(p)); }

Dag consistent_extension(const Pdag& p) {
    const auto n = static_cast<VariableId>(p.size());
    std::vector<char> alive(n, 1);
    std::vector<std::size_t> live_children(n);
    for (VariableId v = 0; v < n; ++v) live_children[v] = p.children(v).size();

    auto admissible = [&](VariableId x) {
        if (live_children[x] != 0) return false;
        std::vector<VariableId> adj;
        for (VariableId v : p.adjacents(x))
            if (alive[v]) adj.push_back(v);
        for (VariableId y : p.neighbors(x)) {
            if (!alive[y]) continue;
            for (VariableId z : adj)
                if (z != y && !p.adjacent(y, z)) return false;
        }
        return true;
    };

    std::set<VariableId, std::greater<>> ready;
    for (VariableId v = 0; v < n; ++v)
        if (admissible(v)) ready.insert(v);

    Dag dag(p.size());
    for (VariableId step = 0; step < n; ++step) {
        if (ready.empty()) throw NoConsistentExtension();
        VariableId x = *ready.begin();
        ready.erase(ready.begin());
        alive[x] = 0;
        for (VariableId pa : p.parents(x)) {
            dag.add_arc(pa, x);
            --live_children[pa];
        }
        for (VariableId y : p.neighbors(x))
            if (alive[y]) dag.add_arc(y, x);
        for (VariableId v : p.adjacents(x))
            if (alive[v] && !ready.contains(v) && admissible(v)) ready.insert(v);
    }
    return dag;
}

}  // namespace cges
