#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cges {

/// Dense node index in [0, n). All graphs of one problem share the index space.
using VariableId = std::int32_t;

struct Arc {
    VariableId from;
    VariableId to;
    auto operator<=>(const Arc&) const = default;
};

/// Unordered pair stored with `first < second`.
struct VariablePair {
    VariableId first;
    VariableId second;

    static VariablePair of(VariableId a, VariableId b) { return a < b ? VariablePair{a, b} : VariablePair{b, a}; }
    auto operator<=>(const VariablePair&) const = default;
};

/// Directed graph with sorted parent/child lists. Arc insertion rejects self-loops and
/// 2-cycles but not longer cycles; `topological_order` is the acyclicity check.
class Dag {
public:
    explicit Dag(std::size_t n = 0) : parents_(n), children_(n) {}

    std::size_t size() const { return parents_.size(); }
    std::size_t num_arcs() const { return num_arcs_; }

    /// Returns false if the arc was already present.
    bool add_arc(VariableId from, VariableId to);
    bool remove_arc(VariableId from, VariableId to);

    bool has_arc(VariableId from, VariableId to) const;
    bool adjacent(VariableId a, VariableId b) const { return has_arc(a, b) || has_arc(b, a); }

    std::span<const VariableId> parents(VariableId v) const { return parents_[v]; }
    std::span<const VariableId> children(VariableId v) const { return children_[v]; }

    /// Arcs in lexicographic (from, to) order.
    std::vector<Arc> arcs() const;

    bool is_acyclic() const;
    /// True if a directed path of length >= 1 leads from `from` to `to`.
    bool has_directed_path(VariableId from, VariableId to) const;

    bool operator==(const Dag&) const = default;

private:
    void check_node(VariableId v) const;

    std::vector<std::vector<VariableId>> parents_;
    std::vector<std::vector<VariableId>> children_;
    std::size_t num_arcs_ = 0;
};

/// Partially directed graph: directed arcs plus undirected edges, disjoint as unordered pairs.
class Pdag {
public:
    explicit Pdag(std::size_t n = 0) : parents_(n), children_(n), neighbors_(n) {}

    static Pdag from_dag(const Dag& dag);

    std::size_t size() const { return parents_.size(); }
    std::size_t num_arcs() const { return num_arcs_; }
    std::size_t num_edges() const { return num_edges_; }

    bool add_arc(VariableId from, VariableId to);
    bool add_edge(VariableId a, VariableId b);
    bool remove_arc(VariableId from, VariableId to);
    bool remove_edge(VariableId a, VariableId b);
    /// Removes whatever connects a and b. Returns false if they were not adjacent.
    bool disconnect(VariableId a, VariableId b);
    /// Turns the undirected edge a--b into a->b.
    void orient(VariableId from, VariableId to);

    bool has_arc(VariableId from, VariableId to) const;
    bool has_edge(VariableId a, VariableId b) const;
    bool adjacent(VariableId a, VariableId b) const {
        return has_edge(a, b) || has_arc(a, b) || has_arc(b, a);
    }

    std::span<const VariableId> parents(VariableId v) const { return parents_[v]; }
    std::span<const VariableId> children(VariableId v) const { return children_[v]; }
    std::span<const VariableId> neighbors(VariableId v) const { return neighbors_[v]; }
    /// Sorted union of parents, children and neighbors.
    std::vector<VariableId> adjacents(VariableId v) const;

    std::vector<Arc> arcs() const;
    std::vector<VariablePair> edges() const;
    /// Unordered pairs of every adjacency, sorted.
    std::vector<VariablePair> skeleton() const;

    bool operator==(const Pdag&) const = default;

private:
    void check_pair(VariableId a, VariableId b) const;

    std::vector<std::vector<VariableId>> parents_;
    std::vector<std::vector<VariableId>> children_;
    std::vector<std::vector<VariableId>> neighbors_;
    std::size_t num_arcs_ = 0;
    std::size_t num_edges_ = 0;
};

class UndirectedGraph {
public:
    explicit UndirectedGraph(std::size_t n = 0) : neighbors_(n) {}

    std::size_t size() const { return neighbors_.size(); }
    std::size_t num_edges() const { return num_edges_; }

    bool add_edge(VariableId a, VariableId b);
    bool has_edge(VariableId a, VariableId b) const;
    std::span<const VariableId> neighbors(VariableId v) const { return neighbors_[v]; }
    std::vector<VariablePair> edges() const;

    bool operator==(const UndirectedGraph&) const = default;

private:
    std::vector<std::vector<VariableId>> neighbors_;
    std::size_t num_edges_ = 0;
};

/// Kahn's procedure, lowest index first among ready nodes. Throws CyclicGraph.
std::vector<VariableId> topological_order(const Dag& g);

/// Drops directions and marries every pair of co-parents.
UndirectedGraph moralize(const Dag& g);

/// Reachability (Bayes-ball) test of x _|_ y | z.
/// Requires x != y and neither in z; throws std::invalid_argument otherwise.
bool d_separated(const Dag& g, VariableId x, VariableId y, std::span<const VariableId> z);

/// Triples (a, c, b) with a -> c <- b, a < b, a and b non-adjacent. Sorted.
std::vector<std::array<VariableId, 3>> v_structures(const Dag& g);

/// Completed PDAG of the equivalence class of a DAG: v-structures oriented, then
/// Meek rules 1-4 applied until nothing changes.
Pdag dag_to_cpdag(const Dag& g);

/// CPDAG of the class represented by p. Throws NoConsistentExtension.
Pdag complete_to_cpdag(const Pdag& p);

/// Dor-Tarsi extension: repeatedly removes an admissible sink, highest index first,
/// so that an undirected edge a--b with a < b becomes a -> b when nothing else forces it.
/// Throws NoConsistentExtension.
Dag consistent_extension(const Pdag& p);

}  // namespace cges
