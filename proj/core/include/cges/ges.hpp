#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cges/graph.hpp"
#include "cges/pair_set.hpp"
#include "cges/scoring.hpp"

namespace cges {

/// Operators whose score change does not exceed this are treated as non-improving.
/// Equivalent DAGs score identically only up to rounding, so smaller gains are noise.
inline constexpr double kMinImprovement = 1e-9;

/// Neighbor sets with more than this many candidates abort the subset search.
inline constexpr std::size_t kMaxSubsetCandidates = 12;

/// Insert(x, y, T): add x -> y and orient t -- y as t -> y for every t in T.
struct InsertOp {
    VariableId x = 0;
    VariableId y = 0;
    std::vector<VariableId> t;
    double delta = 0.0;
    bool operator==(const InsertOp&) const = default;
};

/// Delete(x, y, H): remove the x/y adjacency and orient y -- h, x -- h towards h for every h in H.
struct DeleteOp {
    VariableId x = 0;
    VariableId y = 0;
    std::vector<VariableId> h;
    double delta = 0.0;
    bool operator==(const DeleteOp&) const = default;
};

struct SearchConfig {
    /// Pairs the search may add or remove; empty means every pair.
    std::optional<PairSet> allowed;
    /// Maximum number of insertions in one ges call; empty means unlimited.
    std::optional<std::size_t> insert_limit;
    /// Record every applied operator with the exact score after it.
    bool trace = false;

    bool permits(VariableId a, VariableId b) const { return !allowed || allowed->contains(a, b); }
};

struct TraceRecord {
    enum class Phase { insert, remove };
    Phase phase = Phase::insert;
    VariableId x = 0;
    VariableId y = 0;
    std::vector<VariableId> set;
    double delta = 0.0;
    /// Score of the consistent extension after the operator.
    double score = 0.0;
};

struct PhaseResult {
    Pdag cpdag;
    std::size_t applied = 0;
    std::vector<TraceRecord> trace;
};

struct GesResult {
    Pdag cpdag;
    double score = 0.0;
    std::size_t inserts = 0;
    std::size_t deletes = 0;
    std::vector<TraceRecord> trace;
};

// Operator validity and scoring on a CPDAG ------------------------------------------------

/// NA_{y,x}: undirected neighbors of y that are adjacent to x. Sorted.
std::vector<VariableId> neighbors_adjacent(const Pdag& g, VariableId y, VariableId x);
bool is_clique(const Pdag& g, std::span<const VariableId> nodes);
/// True if every semi-directed path from `from` to `to` passes through `blocked`.
bool blocks_semi_directed_paths(const Pdag& g, VariableId from, VariableId to, std::span<const VariableId> blocked);

bool insert_valid(const Pdag& g, VariableId x, VariableId y, std::span<const VariableId> t);
bool delete_valid(const Pdag& g, VariableId x, VariableId y, std::span<const VariableId> h);
double insert_delta(const Pdag& g, const BdeuScore& score, VariableId x, VariableId y, std::span<const VariableId> t);
double delete_delta(const Pdag& g, const BdeuScore& score, VariableId x, VariableId y, std::span<const VariableId> h);

/// Highest-delta valid Insert(x, y, T) over all T, smallest and then lexicographically first
/// T on ties. Empty if x and y are adjacent or no T is valid. Throws DegreeCapExceeded.
std::optional<InsertOp> best_insert(const Pdag& g, const BdeuScore& score, VariableId x, VariableId y);
/// Same for Delete(x, y, H); requires x -> y or x -- y.
std::optional<DeleteOp> best_delete(const Pdag& g, const BdeuScore& score, VariableId x, VariableId y);

/// Applies the operator and re-completes the result to a CPDAG.
Pdag apply_insert(const Pdag& g, const InsertOp& op);
Pdag apply_delete(const Pdag& g, const DeleteOp& op);

/// Every valid operator with delta > kMinImprovement, enumerating all subsets (no heap,
/// no caching of candidates). Used to verify local optimality.
std::vector<InsertOp> improving_inserts(const Pdag& g, const BdeuScore& score, const SearchConfig& cfg = {});
std::vector<DeleteOp> improving_deletes(const Pdag& g, const BdeuScore& score, const SearchConfig& cfg = {});

// Search phases ---------------------------------------------------------------------------

/// Forward phase: best-first over a candidate heap. At most `cfg.insert_limit` insertions.
PhaseResult fes(const Pdag& start, const BdeuScore& score, const SearchConfig& cfg);
/// Backward phase: repeatedly applies the best improving delete.
PhaseResult bes(const Pdag& start, const BdeuScore& score, const SearchConfig& cfg);

/// Completes `init`, then alternates FES and BES until BES changes nothing. The returned
/// score is the BDeu of the consistent extension of the returned CPDAG.
GesResult ges(const Pdag& init, const BdeuScore& score, const SearchConfig& cfg);
GesResult ges(const Dag& init, const BdeuScore& score, const SearchConfig& cfg);

/// One line per record: `phase x y {set} delta score`.
void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace);

}  // namespace cges
