#pragma once

#include <cstddef>
#include <vector>

#include "cges/graph.hpp"

namespace cges {

/// A permutation of the variables together with its inverse.
class SigmaOrder {
public:
    SigmaOrder() = default;
    /// Throws std::invalid_argument unless `order` is a permutation of 0..n-1.
    explicit SigmaOrder(std::vector<VariableId> order);

    std::size_t size() const { return order_.size(); }
    const std::vector<VariableId>& order() const { return order_; }
    std::size_t position(VariableId v) const { return position_[v]; }
    /// Every arc goes from an earlier to a later position.
    bool consistent(const Dag& g) const;

    bool operator==(const SigmaOrder&) const = default;

private:
    std::vector<VariableId> order_;
    std::vector<std::size_t> position_;
};

/// Shachter reversal of u -> v: v inherits u's parents, u inherits v's other parents and v.
/// Returns the number of arcs created besides v -> u. The caller guarantees that
/// u -> v is the only directed path from u to v.
std::size_t reverse_arc(Dag& g, VariableId u, VariableId v);

/// Reverses every outgoing arc of v, earliest child first, until v is a sink.
/// Returns reversals plus created arcs.
std::size_t make_sink(Dag& g, VariableId v);

/// Cost of make_sink on a copy of g; 0 exactly when v already is a sink.
std::size_t sink_cost(const Dag& g, VariableId v);

/// Builds the order back to front. Each step picks the unplaced node with the lowest
/// summed sink cost over both graphs, converts it in both, and drops it. Ties pick the
/// highest index, so agreeing inputs yield the lexicographically smallest valid order.
SigmaOrder gho_order(const Dag& g1, const Dag& g2);

/// An I-map of g consistent with sigma, obtained by converting nodes to sinks from the
/// last position backwards.
Dag sigma_transform(const Dag& g, const SigmaOrder& sigma);

/// Arc union of both inputs after transforming them to a common gho_order.
Dag fuse(const Dag& g1, const Dag& g2);

}  // namespace cges
