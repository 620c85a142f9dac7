#include "cges/partition.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

namespace cges {

PairSet EdgePartition::subset_pairs(std::size_t i) const {
    PairSet set(num_variables);
    for (const VariablePair& p : subsets.at(i)) set.insert(p.first, p.second);
    return set;
}

SquareMatrix similarity_matrix(const BdeuScore& score) {
    const std::size_t n = score.num_variables();
    if (n < 2) throw std::invalid_argument("similarity_matrix needs at least two variables");
    SquareMatrix directed(n);
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const tbb::blocked_range<std::size_t>& range) {
        for (std::size_t i = range.begin(); i != range.end(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) directed(i, j) = score.similarity(static_cast<VariableId>(i), static_cast<VariableId>(j));
    });
    SquareMatrix sym(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) sym(i, j) = 0.5 * (directed(i, j) + directed(j, i));
    return sym;
}

std::vector<VariableCluster> cluster_variables(const SquareMatrix& similarity, std::size_t k) {
    const std::size_t n = similarity.size();
    if (k < 1 || k > n) throw std::invalid_argument("cluster_variables: k must lie in [1, n]");

    // Slot i holds the cluster whose smallest member is i. `total` keeps summed pairwise
    // similarity between slots so averages are formed from exact sums.
    std::vector<std::vector<VariableId>> members(n);
    std::vector<char> active(n, 1);
    SquareMatrix total = similarity;
    for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<VariableId>(i)};

    for (std::size_t count = n; count > k; --count) {
        std::size_t best_a = n, best_b = n;
        double best = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            if (!active[a]) continue;
            const double size_a = static_cast<double>(members[a].size());
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!active[b]) continue;
                const double avg = total(a, b) / (size_a * static_cast<double>(members[b].size()));
                if (best_a == n || avg > best) {
                    best = avg;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        // best_a < best_b, so the merged cluster keeps slot best_a (its smallest member).
        for (std::size_t c = 0; c < n; ++c) {
            if (!active[c] || c == best_a || c == best_b) continue;
            const double merged = total(best_a, c) + total(best_b, c);
            total(best_a, c) = merged;
            total(c, best_a) = merged;
        }
        members[best_a].insert(members[best_a].end(), members[best_b].begin(), members[best_b].end());
        std::sort(members[best_a].begin(), members[best_a].end());
        members[best_b].clear();
        active[best_b] = 0;
    }

    std::vector<VariableCluster> out;
    for (std::size_t i = 0; i < n; ++i)
        if (active[i]) out.push_back({members[i]});
    return out;
}

EdgePartition assign_edges(const std::vector<VariableCluster>& clusters, std::size_t num_variables) {
    std::vector<std::size_t> owner(num_variables, clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        if (clusters[c].members.empty()) throw std::invalid_argument("assign_edges: empty cluster");
        for (VariableId v : clusters[c].members) {
            if (v < 0 || static_cast<std::size_t>(v) >= num_variables || owner[v] != clusters.size())
                throw std::invalid_argument("assign_edges: clusters do not partition the variables");
            owner[v] = c;
        }
    }
    if (std::find(owner.begin(), owner.end(), clusters.size()) != owner.end())
        throw std::invalid_argument("assign_edges: clusters do not cover every variable");

    EdgePartition partition;
    partition.num_variables = num_variables;
    partition.subsets.resize(clusters.size());
    const auto n = static_cast<VariableId>(num_variables);
    for (VariableId a = 0; a < n; ++a)
        for (VariableId b = a + 1; b < n; ++b)
            if (owner[a] == owner[b]) partition.subsets[owner[a]].push_back({a, b});
    for (VariableId a = 0; a < n; ++a)
        for (VariableId b = a + 1; b < n; ++b) {
            if (owner[a] == owner[b]) continue;
            const std::size_t low = std::min(owner[a], owner[b]);
            const std::size_t high = std::max(owner[a], owner[b]);
            const std::size_t target = partition.subsets[high].size() < partition.subsets[low].size() ? high : low;
            partition.subsets[target].push_back({a, b});
        }
    for (auto& subset : partition.subsets) std::sort(subset.begin(), subset.end());
    return partition;
}

EdgePartition partition_edges(const BdeuScore& score, std::size_t k) {
    const std::size_t n = score.num_variables();
    return assign_edges(cluster_variables(similarity_matrix(score), k), n);
}

std::string partition_csv(const std::vector<VariableCluster>& clusters, const EdgePartition& partition) {
    std::ostringstream out;
    out << "variable,cluster\n";
    std::vector<std::pair<VariableId, std::size_t>> rows;
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (VariableId v : clusters[c].members) rows.emplace_back(v, c);
    std::sort(rows.begin(), rows.end());
    for (auto [v, c] : rows) out << v << ',' << c << '\n';
    out << "subset,pairs\n";
    for (std::size_t i = 0; i < partition.k(); ++i) out << i << ',' << partition.subsets[i].size() << '\n';
    return out.str();
}

}  // namespace cges
