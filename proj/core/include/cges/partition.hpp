#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cges/graph.hpp"
#include "cges/pair_set.hpp"
#include "cges/scoring.hpp"

namespace cges {

/// Dense symmetric n x n matrix of doubles.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t n = 0) : n_(n), values_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> values_;
};

struct VariableCluster {
    std::vector<VariableId> members;  // sorted
    bool operator==(const VariableCluster&) const = default;
};

/// k disjoint subsets of unordered pairs that together cover all n(n-1)/2 pairs.
struct EdgePartition {
    std::size_t num_variables = 0;
    std::vector<std::vector<VariablePair>> subsets;

    std::size_t k() const { return subsets.size(); }
    PairSet subset_pairs(std::size_t i) const;
    bool operator==(const EdgePartition&) const = default;
};

/// Entry (i, j) = (s(Xi, Xj) + s(Xj, Xi)) / 2; the diagonal is zero. Pairs are scored in parallel.
SquareMatrix similarity_matrix(const BdeuScore& score);

/// Agglomerative clustering from singletons. Each step merges the two clusters with the
/// largest average pairwise similarity; ties go to the pair with the lowest first cluster
/// index, then the lowest second index (a cluster's index is its smallest member).
/// Returned clusters are ordered by smallest member. Requires 1 <= k <= n.
std::vector<VariableCluster> cluster_variables(const SquareMatrix& similarity, std::size_t k);

/// Intra-cluster pairs go to their cluster's subset. Cross-cluster pairs, visited in
/// lexicographic order, go to the smaller subset of the two endpoint clusters
/// (ties to the lower cluster index).
EdgePartition assign_edges(const std::vector<VariableCluster>& clusters, std::size_t num_variables);

/// similarity_matrix, cluster_variables and assign_edges in sequence.
EdgePartition partition_edges(const BdeuScore& score, std::size_t k);

/// Debug dump: one `variable,cluster` line per variable, then `subset,pairs` sizes.
std::string partition_csv(const std::vector<VariableCluster>& clusters, const EdgePartition& partition);

}  // namespace cges
