#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <tbb/concurrent_unordered_map.h>

#include "cges/data.hpp"
#include "cges/graph.hpp"

namespace cges {

/// Equivalent sample size of the BDeu prior.
struct EssConfig {
    // Calibrated against empty-graph scores of the reference networks; 10 overshoots on munin.
    double eta = 1.0;
};

/// Memoization key of one decomposable term: child plus its sorted parent set.
struct LocalScoreKey {
    VariableId child = 0;
    std::vector<VariableId> parents;

    LocalScoreKey() = default;
    LocalScoreKey(VariableId c, std::span<const VariableId> ps);
    bool operator==(const LocalScoreKey&) const = default;
};

struct LocalScoreKeyHash {
    std::size_t operator()(const LocalScoreKey& key) const noexcept;
};

/// Thread-safe memo of local scores. Entries are never overwritten: the first value
/// stored for a key wins, so concurrent duplicate computation is harmless.
/// A cache is only meaningful for one (dataset, ess) pair.
class ScoreCache {
public:
    std::optional<double> find(const LocalScoreKey& key) const;
    /// Stores the value unless the key is present; returns the stored value.
    double insert(const LocalScoreKey& key, double value);

    std::size_t size() const { return map_.size(); }
    std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
    std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }

private:
    tbb::concurrent_unordered_map<LocalScoreKey, double, LocalScoreKeyHash> map_;
    mutable std::atomic<std::uint64_t> hits_{0};
    mutable std::atomic<std::uint64_t> misses_{0};
};

/// Sparse family counts: only parent configurations observed in the data are kept.
struct ContingencyTable {
    std::size_t child_states = 0;
    /// Product of parent cardinalities, including configurations never observed.
    double parent_configurations = 1.0;
    /// One row of `child_states` counts per observed parent configuration.
    std::vector<std::uint32_t> counts;

    std::size_t observed_configurations() const { return child_states == 0 ? 0 : counts.size() / child_states; }
};

ContingencyTable count_family(const Dataset& data, VariableId child, std::span<const VariableId> parents);

/// BDeu term of `child` given `parents`; parent configurations with no data contribute 0.
double bdeu_from_counts(const ContingencyTable& table, EssConfig ess);

/// Thread-safe log Gamma.
double log_gamma(double x);

/// Decomposable BDeu with a uniform structure prior, bound to one dataset and cache.
class BdeuScore {
public:
    /// Throws std::invalid_argument if eta is not positive.
    BdeuScore(const Dataset& data, EssConfig ess, ScoreCache& cache);

    const Dataset& data() const { return *data_; }
    EssConfig ess() const { return ess_; }
    ScoreCache& cache() const { return *cache_; }
    std::size_t num_variables() const { return data_->num_variables(); }

    /// Parent order is irrelevant. Requires child not in parents.
    double local(VariableId child, std::span<const VariableId> parents) const;
    double graph(const Dag& g) const;
    /// s(xi, xj) = local(xi, {xj}) - local(xi, {}).
    double similarity(VariableId xi, VariableId xj) const;
    /// graph(g) / rows; throws ZeroInstances on empty data.
    double normalized(const Dag& g) const;

private:
    const Dataset* data_;
    EssConfig ess_;
    ScoreCache* cache_;
};

double local_bdeu(VariableId child, std::span<const VariableId> parents, const Dataset& data, EssConfig ess, ScoreCache& cache);
double graph_bdeu(const Dag& g, const Dataset& data, EssConfig ess, ScoreCache& cache);
double similarity(VariableId xi, VariableId xj, const Dataset& data, EssConfig ess, ScoreCache& cache);
double normalized_bdeu(const Dag& g, const Dataset& data, EssConfig ess, ScoreCache& cache);

}  // namespace cges
